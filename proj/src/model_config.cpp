#include "qlm/model_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qlm {

namespace {

using nlohmann::json;

const json& require_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ValidationError(std::string("config is missing \"") + key + "\"");
  return *it;
}

double require_number(const json& value, const std::string& what) {
  if (!value.is_number())
    throw ValidationError(what + " must be a number");
  const double d = value.get<double>();
  if (!std::isfinite(d)) throw ValidationError(what + " is not finite");
  return d;
}

Eigen::MatrixXd parse_matrix(const json& value, const std::string& what) {
  if (!value.is_array() || value.empty())
    throw ValidationError(what + " must be a nonempty array of rows");
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.empty())
      throw ValidationError(what + " row " + std::to_string(r) +
                            " must be a nonempty array");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows),
               static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ValidationError(what + " rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          require_number(row[c], what + " entry");
    }
  }
  return m;
}

}  // namespace

Model load_model_config(const json& document) {
  if (!document.is_object())
    throw ValidationError("config must be a JSON object");

  const json& dim_field = require_field(document, "embedding_dim");
  if (!dim_field.is_number_integer() || dim_field.get<std::int64_t>() < 1)
    throw ValidationError("\"embedding_dim\" must be a positive integer");
  const auto d = static_cast<Eigen::Index>(dim_field.get<std::int64_t>());

  const json& tokens = require_field(document, "tokens");
  if (!tokens.is_array() || tokens.empty())
    throw ValidationError("\"tokens\" must be a nonempty array");

  std::vector<std::string> symbols;
  std::vector<Eigen::VectorXd> vectors;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const json& tok = tokens[i];
    const json& symbol = require_field(tok, "symbol");
    if (!symbol.is_string())
      throw ValidationError("token symbol must be a string");
    symbols.push_back(symbol.get<std::string>());

    const json& vec = require_field(tok, "embedding");
    if (!vec.is_array() || vec.size() != static_cast<std::size_t>(d))
      throw ValidationError("embedding of token \"" + symbols.back() +
                            "\" must have length " + std::to_string(d));
    Eigen::VectorXd v(d);
    for (Eigen::Index k = 0; k < d; ++k)
      v[k] = require_number(vec[static_cast<std::size_t>(k)],
                            "embedding entry of \"" + symbols.back() + "\"");
    vectors.push_back(std::move(v));
  }

  Vocabulary vocab(std::move(symbols));
  Embedding emb(d, std::move(vectors));

  const json& scaling_field = require_field(document, "scaling");
  if (!scaling_field.is_string())
    throw ValidationError("\"scaling\" must be a string");
  const Scaling scaling = scaling_from_string(scaling_field.get<std::string>());

  TokenId vacuum = 0;
  if (auto it = document.find("phi_vacuum_token"); it != document.end()) {
    if (!it->is_string())
      throw ValidationError("\"phi_vacuum_token\" must be a string");
    const auto id = vocab.find(it->get<std::string>());
    if (!id)
      throw ValidationError("\"phi_vacuum_token\" names unknown token \"" +
                            it->get<std::string>() + "\"");
    vacuum = *id;
  }

  const json& blocks_field = require_field(document, "blocks");
  if (!blocks_field.is_array() || blocks_field.empty())
    throw ValidationError("\"blocks\" must be a nonempty array");

  std::vector<AttentionBlock> blocks;
  for (std::size_t l = 0; l < blocks_field.size(); ++l) {
    const json& b = blocks_field[l];
    const std::string where = "block " + std::to_string(l + 1);
    Eigen::MatrixXd W_Q = parse_matrix(require_field(b, "W_Q"), where + " W_Q");
    Eigen::MatrixXd W_K = parse_matrix(require_field(b, "W_K"), where + " W_K");
    Eigen::MatrixXd W_V = parse_matrix(require_field(b, "W_V"), where + " W_V");

    const json& ffn_field = require_field(b, "ffn");
    if (!ffn_field.is_object())
      throw ValidationError(where + " \"ffn\" must be an object");
    std::vector<TokenId> ffn(vocab.size(), 0);
    std::vector<bool> seen(vocab.size(), false);
    for (const auto& [from, to] : ffn_field.items()) {
      const auto from_id = vocab.find(from);
      if (!from_id)
        throw ValidationError(where + " ffn has unknown token symbol \"" +
                              from + "\"");
      if (!to.is_string())
        throw ValidationError(where + " ffn values must be token symbols");
      const auto to_id = vocab.find(to.get<std::string>());
      if (!to_id)
        throw ValidationError(where + " ffn has unknown token symbol \"" +
                              to.get<std::string>() + "\"");
      ffn[*from_id] = *to_id;
      seen[*from_id] = true;
    }
    for (TokenId x = 0; x < vocab.size(); ++x) {
      if (!seen[x])
        throw ValidationError(where + " ffn is missing an entry for \"" +
                              vocab.symbol(x) + "\"");
    }

    try {
      blocks.push_back(make_block(std::move(W_Q), std::move(W_K),
                                  std::move(W_V), ffn, emb));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }

  return Model{std::move(vocab), std::move(emb),
               TransformerStack{std::move(blocks), scaling}, vacuum};
}

Model load_model_string(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  return load_model_config(document);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model_string(buffer.str());
}

std::string_view example_config_json() {
  // Keep in sync with configs/example.json (a test asserts they agree).
  static constexpr std::string_view kConfig = R"({
  "embedding_dim": 2,
  "tokens": [
    {"symbol": "x0", "embedding": [1.0, 0.0]},
    {"symbol": "x1", "embedding": [0.0, 1.0]}
  ],
  "scaling": "none",
  "phi_vacuum_token": "x0",
  "blocks": [
    {
      "W_Q": [[1.0, 0.0], [0.0, 1.0]],
      "W_K": [[0.0, 1.0], [1.0, 0.0]],
      "W_V": [[1.0, 0.0], [0.0, 1.0]],
      "ffn": {"x0": "x0", "x1": "x1"}
    },
    {
      "W_Q": [[1.0, 0.0], [0.0, 1.0]],
      "W_K": [[1.0, 0.0], [0.0, 1.0]],
      "W_V": [[0.0, 1.0], [1.0, 0.0]],
      "ffn": {"x0": "x0", "x1": "x1"}
    }
  ]
}
)";
  return kConfig;
}

Model example_model() { return load_model_string(example_config_json()); }

}  // namespace qlm
