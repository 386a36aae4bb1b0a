#include "qlm/vocab.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace qlm {

namespace {

bool all_finite(const Eigen::VectorXd& v) {
  return v.allFinite();
}

bool within_tolerance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() <= kEmbeddingMatchTolerance;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("vocabulary must not be empty");
  for (std::size_t id = 0; id < symbols_.size(); ++id) {
    const std::string& s = symbols_[id];
    if (s.empty()) throw ValidationError("token symbol must not be empty");
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c)))
        throw ValidationError("token symbol must not contain whitespace: \"" +
                              s + "\"");
    }
    auto [it, inserted] = by_symbol_.emplace(s, static_cast<TokenId>(id));
    if (!inserted)
      throw ValidationError("duplicate token symbol: \"" + s + "\"");
  }
}

const std::string& Vocabulary::symbol(TokenId id) const {
  if (id >= symbols_.size())
    throw ValidationError("token id out of range: " + std::to_string(id));
  return symbols_[id];
}

std::optional<TokenId> Vocabulary::find(std::string_view symbol) const {
  auto it = by_symbol_.find(symbol);
  if (it == by_symbol_.end()) return std::nullopt;
  return it->second;
}

Embedding::Embedding(Eigen::Index dim, std::vector<Eigen::VectorXd> vectors)
    : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ < 1) throw ValidationError("embedding dimension must be >= 1");
  if (vectors_.empty())
    throw ValidationError("embedding must cover at least one token");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].size() != dim_)
      throw ValidationError("embedding vector for token " + std::to_string(i) +
                            " has length " + std::to_string(vectors_[i].size()) +
                            ", expected " + std::to_string(dim_));
    if (!all_finite(vectors_[i]))
      throw ValidationError("embedding vector for token " + std::to_string(i) +
                            " has non-finite entries");
  }
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors_.size(); ++j) {
      if (within_tolerance(vectors_[i], vectors_[j]))
        throw ValidationError(
            "tokens " + std::to_string(i) + " and " + std::to_string(j) +
            " have indistinguishable embeddings (within match tolerance)");
    }
  }
}

const Eigen::VectorXd& Embedding::of(TokenId id) const {
  if (id >= vectors_.size())
    throw ValidationError("token id out of range: " + std::to_string(id));
  return vectors_[id];
}

std::vector<TokenId> validate_value_closure(const Eigen::MatrixXd& W_V,
                                            const Embedding& emb) {
  if (W_V.rows() != emb.dim() || W_V.cols() != emb.dim())
    throw ValidationError("W_V must be d x d with d = " +
                          std::to_string(emb.dim()));
  if (!W_V.allFinite())
    throw ValidationError("W_V has non-finite entries");

  std::vector<TokenId> map;
  map.reserve(emb.count());
  for (TokenId x = 0; x < emb.count(); ++x) {
    const Eigen::VectorXd image = W_V * emb.of(x);
    std::optional<TokenId> match;
    for (TokenId y = 0; y < emb.count(); ++y) {
      if (!within_tolerance(image, emb.of(y))) continue;
      if (match)
        throw ValidationError("value closure is ambiguous: W_V * emb(" +
                              std::to_string(x) + ") matches tokens " +
                              std::to_string(*match) + " and " +
                              std::to_string(y));
      match = y;
    }
    if (!match)
      throw ValidationError("value closure violated: W_V * emb(" +
                            std::to_string(x) +
                            ") matches no token embedding");
    map.push_back(*match);
  }
  return map;
}

TokenSeq parse_text(const Vocabulary& vocab, std::string_view spaced_symbols) {
  TokenSeq out;
  std::istringstream stream{std::string(spaced_symbols)};
  std::string word;
  while (stream >> word) {
    auto id = vocab.find(word);
    if (!id) throw ValidationError("unknown token symbol: \"" + word + "\"");
    out.push_back(*id);
  }
  if (out.empty()) throw ValidationError("text must contain at least one token");
  return out;
}

std::string format_text(const Vocabulary& vocab, const TokenSeq& text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0) out += ' ';
    out += vocab.symbol(text[i]);
  }
  return out;
}

}  // namespace qlm
