#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qlm/vocab.hpp"

namespace qlm {

// Whether similarity scores carry the 1/sqrt(d) factor (d = embedding dim).
enum class Scaling { kInvSqrtD, kNone };

std::string to_string(Scaling scaling);
Scaling scaling_from_string(std::string_view name);

// One decoder block: attention mechanism (W_Q, W_K, W_V) plus the
// feed-forward lookup applied to the value output. value_map composes the
// W_V closure map with the FFN table, so value_map[x] = FFN(W_V x); it is
// total on the vocabulary.
struct AttentionBlock {
  Eigen::MatrixXd W_Q;             // d' x d
  Eigen::MatrixXd W_K;             // d' x d
  Eigen::MatrixXd W_V;             // d x d
  std::vector<TokenId> value_map;  // token -> FFN(W_V token)

  Eigen::Index d_prime() const { return W_Q.rows(); }
};

// Validates shapes against the embedding, runs the value-closure check and
// composes it with the FFN table (one entry per token).
AttentionBlock make_block(Eigen::MatrixXd W_Q, Eigen::MatrixXd W_K,
                          Eigen::MatrixXd W_V, const std::vector<TokenId>& ffn,
                          const Embedding& emb);

// L >= 1 blocks sharing the embedding dimension, plus the scaling convention.
struct TransformerStack {
  std::vector<AttentionBlock> blocks;
  Scaling scaling = Scaling::kInvSqrtD;

  std::size_t depth() const { return blocks.size(); }
};

// Probabilities keyed by outcome; missing keys mean 0. Values are
// nonnegative and sum to 1 within 1e-12.
using TokenDistribution = std::map<TokenId, double>;
using JointDistribution = std::map<TokenSeq, double>;

// s_i = c * <W_Q x_n, W_K x_i> for every key position i, with the last token
// as the query; c is 1/sqrt(d) or 1 per the scaling convention.
Eigen::VectorXd similarity_scores(const AttentionBlock& block,
                                  const TokenSeq& text, const Embedding& emb,
                                  Scaling scaling);

// exp(s_i)/sum_j exp(s_j), computed with max-subtraction.
std::vector<double> softmax(const Eigen::VectorXd& scores);

// P(y) = sum of attention weights over positions whose value_map output is y.
TokenDistribution next_token_distribution(const AttentionBlock& block,
                                          const TokenSeq& text,
                                          const Embedding& emb,
                                          Scaling scaling);

// Full enumeration of the depth-L generation tree: the entry for
// (y_1,...,y_L) is the product of per-step aggregated probabilities, where
// step l conditions on the input text extended by y_1..y_{l-1}.
JointDistribution joint_distribution(const TransformerStack& stack,
                                     const TokenSeq& text,
                                     const Embedding& emb);

struct SampledText {
  TokenSeq output;
  double probability;  // product of step_probabilities
  std::vector<double> step_probabilities;
};

// One generation trajectory drawn from the per-step distributions.
// Deterministic in (stack, text, seed).
SampledText sample_text(const TransformerStack& stack, const TokenSeq& text,
                        const Embedding& emb, std::uint64_t seed);

}  // namespace qlm
