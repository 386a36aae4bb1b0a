#pragma once

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qlm/vocab.hpp"

namespace qlm {

// Largest total dimension for which dense operators may be materialized.
inline constexpr std::size_t kDenseDimensionGuard = 4096;

// Truncated Fock space over the N-dimensional token space: the scalar block
// (index 0) plus one block per sequence length 1..M. Block n has dimension
// N^n; a length-n sequence indexes its block big-endian (first token is the
// most significant digit).
struct FockSpace {
  int vocab_size;  // N >= 1
  int truncation;  // M >= 1

  FockSpace(int N, int M);

  std::size_t block_dim(int n) const;     // N^n
  std::size_t block_offset(int n) const;  // sum of block dims below n
  std::size_t total_dim() const;          // 1 + N + ... + N^M

  // Index of a sequence within its block; length fixes the block.
  std::size_t sequence_index(const TokenSeq& seq) const;
};

// diag(alpha, A_1, ..., A_M): a scalar plus one optional dense matrix per
// block; an absent block is the zero operator there.
struct BlockDiagOperator {
  std::complex<double> scalar{0.0, 0.0};
  std::vector<std::optional<Eigen::MatrixXcd>> blocks;  // blocks[n-1] acts on block n

  static BlockDiagOperator zero(const FockSpace& space);
  static BlockDiagOperator identity(const FockSpace& space);

  std::optional<Eigen::MatrixXcd>& block(int n);
  const std::optional<Eigen::MatrixXcd>& block(int n) const;

  std::complex<double> trace() const;

  // Materializes the full total_dim x total_dim matrix. Throws when the
  // dimension guard is exceeded.
  Eigen::MatrixXcd full_matrix(const FockSpace& space) const;
};

// Sparse density operator: a probability-weighted set of product-basis
// projectors concentrated in one block. Denotes
// diag(0,...,0, sum_seq w(seq)|seq><seq|, 0,...) with the nonzero block at
// block_index.
struct SequenceEnsembleState {
  int block_index = 0;
  std::map<TokenSeq, double> weights;

  double weight_sum() const;

  // Enforces the representation invariants: key lengths equal block_index,
  // ids within the vocabulary, weights >= 0 summing to 1 within 1e-12.
  void check(const FockSpace& space) const;
};

// Weight 1 on the input text, at block n = text length.
SequenceEnsembleState input_state(const TokenSeq& text, const FockSpace& space);

// Dense form: the diagonal matrix of ensemble weights in the product token
// basis, at the state's block. Guarded by kDenseDimensionGuard.
BlockDiagOperator to_dense(const SequenceEnsembleState& state,
                           const FockSpace& space);

}  // namespace qlm
