#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qlm {

using TokenId = std::uint32_t;

// A text: ordered token ids. Operations that require a nonempty text check it.
using TokenSeq = std::vector<TokenId>;

// Thrown on any model/input validation failure. The CLI maps it to exit 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Token {
  TokenId id;
  std::string symbol;
};

// Token ids 0..N-1, bijective with display symbols, N >= 1.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(TokenId id) const;
  Token token(TokenId id) const { return Token{id, symbol(id)}; }
  std::optional<TokenId> find(std::string_view symbol) const;

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, TokenId, std::less<>> by_symbol_;
};

// Componentwise tolerance for matching a vector against token embeddings.
inline constexpr double kEmbeddingMatchTolerance = 1e-9;

// One real vector of length d per token. Vectors must be finite and pairwise
// distinguishable at kEmbeddingMatchTolerance.
class Embedding {
 public:
  Embedding(Eigen::Index dim, std::vector<Eigen::VectorXd> vectors);

  Eigen::Index dim() const { return dim_; }
  std::size_t count() const { return vectors_.size(); }
  const Eigen::VectorXd& of(TokenId id) const;

 private:
  Eigen::Index dim_;
  std::vector<Eigen::VectorXd> vectors_;
};

// Maps every token x to the unique token whose embedding equals W_V * emb(x)
// componentwise within kEmbeddingMatchTolerance. Throws ValidationError when
// some product matches no token (closure violation) or more than one
// (ambiguous match).
std::vector<TokenId> validate_value_closure(const Eigen::MatrixXd& W_V,
                                            const Embedding& emb);

// Splits a whitespace-separated symbol string into token ids.
TokenSeq parse_text(const Vocabulary& vocab, std::string_view spaced_symbols);

// Space-joined symbols, the inverse of parse_text.
std::string format_text(const Vocabulary& vocab, const TokenSeq& text);

}  // namespace qlm
