#pragma once

// Randomized desk-scale model generator shared by the unit and acceptance
// suites. Weights only need to be valid draws, not bit-stable across
// platforms, so std::normal_distribution is fine here.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qlm/model_config.hpp"
#include "qlm/transformer.hpp"
#include "qlm/vocab.hpp"

namespace qlm::testing {

struct InstanceSpec {
  int vocab_size = 2;       // N
  int embedding_dim = 2;    // d
  int key_dim = 2;          // d'
  int depth = 1;            // L
  int input_length = 1;     // n
  Scaling scaling = Scaling::kNone;
};

struct Instance {
  Model model;
  TokenSeq input;
};

// Embeddings that admit a token-permutation W_V: standard basis vectors when
// d >= N (any permutation works), otherwise N-th roots of unity in the first
// two coordinates (cyclic rotations work).
inline Embedding make_embedding(int N, int d) {
  std::vector<Eigen::VectorXd> vectors;
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    if (d >= N) {
      v[i] = 1.0;
    } else {
      const double angle = 2.0 * std::numbers::pi * i / N;
      v[0] = std::cos(angle);
      v[1] = std::sin(angle);
    }
    vectors.push_back(std::move(v));
  }
  return Embedding(d, std::move(vectors));
}

// A d x d matrix permuting the embedding set: a random full permutation for
// basis embeddings, a random rotation by 2*pi*j/N for circle embeddings.
inline Eigen::MatrixXd make_value_matrix(int N, int d, std::mt19937_64& gen) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(d, d);
  if (d >= N) {
    std::vector<int> perm(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), gen);
    W.setZero();
    for (int i = 0; i < N; ++i) W(perm[static_cast<std::size_t>(i)], i) = 1.0;
    for (int i = N; i < d; ++i) W(i, i) = 1.0;
  } else {
    const auto shift = static_cast<int>(gen() % static_cast<unsigned>(N));
    const double angle = 2.0 * std::numbers::pi * shift / N;
    W(0, 0) = std::cos(angle);
    W(0, 1) = -std::sin(angle);
    W(1, 0) = std::sin(angle);
    W(1, 1) = std::cos(angle);
  }
  return W;
}

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols,
                                       std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = normal(gen);
  return m;
}

inline Instance make_instance(const InstanceSpec& spec, std::mt19937_64& gen) {
  const int N = spec.vocab_size;

  std::vector<std::string> symbols;
  for (int i = 0; i < N; ++i) symbols.push_back("t" + std::to_string(i));
  Vocabulary vocab(std::move(symbols));
  Embedding emb = make_embedding(N, spec.embedding_dim);

  std::vector<AttentionBlock> blocks;
  for (int l = 0; l < spec.depth; ++l) {
    std::vector<TokenId> ffn(static_cast<std::size_t>(N));
    for (auto& y : ffn) y = static_cast<TokenId>(gen() % static_cast<unsigned>(N));
    blocks.push_back(make_block(
        gaussian_matrix(spec.key_dim, spec.embedding_dim, gen),
        gaussian_matrix(spec.key_dim, spec.embedding_dim, gen),
        make_value_matrix(N, spec.embedding_dim, gen), ffn, emb));
  }

  TokenSeq input(static_cast<std::size_t>(spec.input_length));
  for (auto& id : input) id = static_cast<TokenId>(gen() % static_cast<unsigned>(N));

  return Instance{
      Model{std::move(vocab), std::move(emb),
            TransformerStack{std::move(blocks), spec.scaling}, TokenId{0}},
      std::move(input)};
}

}  // namespace qlm::testing
