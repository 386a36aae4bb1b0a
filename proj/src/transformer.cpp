#include "qlm/transformer.hpp"

#include <algorithm>
#include <cmath>

#include "qlm/rng.hpp"

namespace qlm {

std::string to_string(Scaling scaling) {
  return scaling == Scaling::kInvSqrtD ? "inv_sqrt_d" : "none";
}

Scaling scaling_from_string(std::string_view name) {
  if (name == "inv_sqrt_d") return Scaling::kInvSqrtD;
  if (name == "none") return Scaling::kNone;
  throw ValidationError("unknown scaling convention: \"" + std::string(name) +
                        "\" (expected \"inv_sqrt_d\" or \"none\")");
}

AttentionBlock make_block(Eigen::MatrixXd W_Q, Eigen::MatrixXd W_K,
                          Eigen::MatrixXd W_V, const std::vector<TokenId>& ffn,
                          const Embedding& emb) {
  const Eigen::Index d = emb.dim();
  if (W_Q.rows() < 1)
    throw ValidationError("W_Q must have at least one row");
  if (W_Q.cols() != d)
    throw ValidationError("W_Q must have d = " + std::to_string(d) +
                          " columns, got " + std::to_string(W_Q.cols()));
  if (W_K.rows() != W_Q.rows() || W_K.cols() != d)
    throw ValidationError("W_K must match W_Q's shape " +
                          std::to_string(W_Q.rows()) + " x " +
                          std::to_string(d));
  if (!W_Q.allFinite() || !W_K.allFinite())
    throw ValidationError("W_Q/W_K have non-finite entries");
  if (ffn.size() != emb.count())
    throw ValidationError("FFN table must have one entry per token");
  for (TokenId y : ffn) {
    if (y >= emb.count())
      throw ValidationError("FFN table maps to unknown token id " +
                            std::to_string(y));
  }

  const std::vector<TokenId> closure = validate_value_closure(W_V, emb);
  std::vector<TokenId> value_map(emb.count());
  for (TokenId x = 0; x < emb.count(); ++x) value_map[x] = ffn[closure[x]];

  return AttentionBlock{std::move(W_Q), std::move(W_K), std::move(W_V),
                        std::move(value_map)};
}

Eigen::VectorXd similarity_scores(const AttentionBlock& block,
                                  const TokenSeq& text, const Embedding& emb,
                                  Scaling scaling) {
  if (text.empty()) throw ValidationError("text must not be empty");
  if (block.W_Q.cols() != emb.dim())
    throw ValidationError("attention block dimension mismatch: W_Q has " +
                          std::to_string(block.W_Q.cols()) +
                          " columns, embedding dim is " +
                          std::to_string(emb.dim()));

  const double c =
      scaling == Scaling::kInvSqrtD ? 1.0 / std::sqrt(double(emb.dim())) : 1.0;
  const Eigen::VectorXd query = block.W_Q * emb.of(text.back());

  Eigen::VectorXd scores(static_cast<Eigen::Index>(text.size()));
  for (std::size_t i = 0; i < text.size(); ++i) {
    scores[static_cast<Eigen::Index>(i)] =
        c * query.dot(block.W_K * emb.of(text[i]));
  }
  return scores;
}

std::vector<double> softmax(const Eigen::VectorXd& scores) {
  if (scores.size() == 0)
    throw ValidationError("softmax requires at least one score");

  const double max = scores.maxCoeff();
  std::vector<double> out(static_cast<std::size_t>(scores.size()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(scores[i] - max);
    sum += out[static_cast<std::size_t>(i)];
  }
  for (double& p : out) p /= sum;
  return out;
}

TokenDistribution next_token_distribution(const AttentionBlock& block,
                                          const TokenSeq& text,
                                          const Embedding& emb,
                                          Scaling scaling) {
  const std::vector<double> attention =
      softmax(similarity_scores(block, text, emb, scaling));

  // Positions with the same value_map output aggregate into one outcome.
  TokenDistribution dist;
  for (std::size_t i = 0; i < text.size(); ++i) {
    dist[block.value_map[text[i]]] += attention[i];
  }
  return dist;
}

namespace {

void enumerate_outputs(const TransformerStack& stack, const Embedding& emb,
                       TokenSeq& context, std::size_t input_length,
                       std::size_t step, double probability,
                       JointDistribution& out) {
  if (step == stack.depth()) {
    out.emplace(TokenSeq(context.begin() +
                             static_cast<std::ptrdiff_t>(input_length),
                         context.end()),
                probability);
    return;
  }
  const TokenDistribution dist = next_token_distribution(
      stack.blocks[step], context, emb, stack.scaling);
  for (const auto& [token, p] : dist) {
    if (p <= 0.0) continue;
    context.push_back(token);
    enumerate_outputs(stack, emb, context, input_length, step + 1,
                      probability * p, out);
    context.pop_back();
  }
}

}  // namespace

JointDistribution joint_distribution(const TransformerStack& stack,
                                     const TokenSeq& text,
                                     const Embedding& emb) {
  if (text.empty()) throw ValidationError("text must not be empty");
  if (stack.depth() == 0)
    throw ValidationError("transformer stack must have at least one block");

  JointDistribution out;
  TokenSeq context = text;
  enumerate_outputs(stack, emb, context, text.size(), 0, 1.0, out);
  return out;
}

SampledText sample_text(const TransformerStack& stack, const TokenSeq& text,
                        const Embedding& emb, std::uint64_t seed) {
  if (text.empty()) throw ValidationError("text must not be empty");
  if (stack.depth() == 0)
    throw ValidationError("transformer stack must have at least one block");

  Rng rng(derive_seed(seed, 0));
  SampledText result;
  result.probability = 1.0;

  TokenSeq context = text;
  for (std::size_t step = 0; step < stack.depth(); ++step) {
    const TokenDistribution dist = next_token_distribution(
        stack.blocks[step], context, emb, stack.scaling);

    std::vector<TokenId> tokens;
    std::vector<double> weights;
    tokens.reserve(dist.size());
    weights.reserve(dist.size());
    for (const auto& [token, p] : dist) {
      tokens.push_back(token);
      weights.push_back(p);
    }

    const std::size_t pick = rng.sample_index(weights);
    context.push_back(tokens[pick]);
    result.output.push_back(tokens[pick]);
    result.step_probabilities.push_back(weights[pick]);
    result.probability *= weights[pick];
  }
  return result;
}

}  // namespace qlm
