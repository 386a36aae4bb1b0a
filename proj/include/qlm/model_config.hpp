#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "qlm/transformer.hpp"
#include "qlm/vocab.hpp"

namespace qlm {

// A fully validated model: vocabulary, embeddings, blocks and conventions.
// No partially constructed model escapes the loader.
struct Model {
  Vocabulary vocab;
  Embedding emb;
  TransformerStack stack;
  TokenId vacuum_token = 0;
};

// Parses and validates the JSON model document:
//   {"embedding_dim": int,
//    "tokens": [{"symbol": str, "embedding": [float,...]}, ...],
//    "scaling": "inv_sqrt_d"|"none",
//    "phi_vacuum_token": str,          (optional, default: first token)
//    "blocks": [{"W_Q": [[float]], "W_K": [[float]], "W_V": [[float]],
//                "ffn": {symbol: symbol, ...}}, ...]}
// Matrices are row-major; W_Q/W_K have d' rows, W_V is d x d.
// Throws ValidationError with a diagnostic on any defect.
Model load_model_config(const nlohmann::json& document);

// Parses a JSON string, then loads it.
Model load_model_string(std::string_view text);

// Reads, parses and loads a config file.
Model load_model_file(const std::string& path);

// The built-in two-token demonstration model (identity/swap blocks over the
// standard basis, scaling "none") and its canonical input text. The same
// document ships as configs/example.json.
std::string_view example_config_json();
Model example_model();
inline constexpr std::string_view kExampleInput = "x0 x1 x0";

}  // namespace qlm
