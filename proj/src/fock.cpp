#include "qlm/fock.hpp"

#include <cmath>
#include <string>

namespace qlm {

namespace {

void require_dense(std::size_t dim, const char* what) {
  if (dim > kDenseDimensionGuard)
    throw ValidationError(std::string(what) + ": total dimension " +
                          std::to_string(dim) + " exceeds the dense guard " +
                          std::to_string(kDenseDimensionGuard));
}

}  // namespace

FockSpace::FockSpace(int N, int M) : vocab_size(N), truncation(M) {
  if (N < 1) throw ValidationError("Fock space needs a vocabulary of size >= 1");
  if (M < 1) throw ValidationError("Fock space truncation must be >= 1");
}

std::size_t FockSpace::block_dim(int n) const {
  if (n < 0 || n > truncation)
    throw ValidationError("block index " + std::to_string(n) +
                          " outside 0.." + std::to_string(truncation));
  std::size_t dim = 1;
  for (int k = 0; k < n; ++k) dim *= static_cast<std::size_t>(vocab_size);
  return dim;
}

std::size_t FockSpace::block_offset(int n) const {
  if (n < 0 || n > truncation)
    throw ValidationError("block index " + std::to_string(n) +
                          " outside 0.." + std::to_string(truncation));
  std::size_t offset = 0;
  std::size_t dim = 1;
  for (int k = 0; k < n; ++k) {
    offset += dim;
    dim *= static_cast<std::size_t>(vocab_size);
  }
  return offset;
}

std::size_t FockSpace::total_dim() const {
  return block_offset(truncation) + block_dim(truncation);
}

std::size_t FockSpace::sequence_index(const TokenSeq& seq) const {
  if (seq.empty() || seq.size() > static_cast<std::size_t>(truncation))
    throw ValidationError("sequence length " + std::to_string(seq.size()) +
                          " outside 1.." + std::to_string(truncation));
  std::size_t index = 0;
  for (TokenId id : seq) {
    if (id >= static_cast<TokenId>(vocab_size))
      throw ValidationError("token id " + std::to_string(id) +
                            " outside the vocabulary");
    index = index * static_cast<std::size_t>(vocab_size) + id;
  }
  return index;
}

BlockDiagOperator BlockDiagOperator::zero(const FockSpace& space) {
  BlockDiagOperator op;
  op.blocks.resize(static_cast<std::size_t>(space.truncation));
  return op;
}

BlockDiagOperator BlockDiagOperator::identity(const FockSpace& space) {
  require_dense(space.total_dim(), "identity operator");
  BlockDiagOperator op = zero(space);
  op.scalar = 1.0;
  for (int n = 1; n <= space.truncation; ++n) {
    const auto dim = static_cast<Eigen::Index>(space.block_dim(n));
    op.block(n) = Eigen::MatrixXcd::Identity(dim, dim);
  }
  return op;
}

std::optional<Eigen::MatrixXcd>& BlockDiagOperator::block(int n) {
  if (n < 1 || static_cast<std::size_t>(n) > blocks.size())
    throw ValidationError("block index " + std::to_string(n) +
                          " outside 1.." + std::to_string(blocks.size()));
  return blocks[static_cast<std::size_t>(n) - 1];
}

const std::optional<Eigen::MatrixXcd>& BlockDiagOperator::block(int n) const {
  if (n < 1 || static_cast<std::size_t>(n) > blocks.size())
    throw ValidationError("block index " + std::to_string(n) +
                          " outside 1.." + std::to_string(blocks.size()));
  return blocks[static_cast<std::size_t>(n) - 1];
}

std::complex<double> BlockDiagOperator::trace() const {
  std::complex<double> sum = scalar;
  for (const auto& b : blocks) {
    if (b) sum += b->trace();
  }
  return sum;
}

Eigen::MatrixXcd BlockDiagOperator::full_matrix(const FockSpace& space) const {
  if (blocks.size() != static_cast<std::size_t>(space.truncation))
    throw ValidationError("operator has " + std::to_string(blocks.size()) +
                          " blocks, space truncation is " +
                          std::to_string(space.truncation));
  const std::size_t dim = space.total_dim();
  require_dense(dim, "full matrix");

  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  full(0, 0) = scalar;
  for (int n = 1; n <= space.truncation; ++n) {
    const auto& b = block(n);
    if (!b) continue;
    const auto bdim = static_cast<Eigen::Index>(space.block_dim(n));
    if (b->rows() != bdim || b->cols() != bdim)
      throw ValidationError("block " + std::to_string(n) + " is " +
                            std::to_string(b->rows()) + " x " +
                            std::to_string(b->cols()) + ", expected " +
                            std::to_string(bdim) + " square");
    const auto offset = static_cast<Eigen::Index>(space.block_offset(n));
    full.block(offset, offset, bdim, bdim) = *b;
  }
  return full;
}

double SequenceEnsembleState::weight_sum() const {
  double sum = 0.0;
  for (const auto& [seq, w] : weights) sum += w;
  return sum;
}

void SequenceEnsembleState::check(const FockSpace& space) const {
  if (block_index < 1 || block_index > space.truncation)
    throw ValidationError("state block index " + std::to_string(block_index) +
                          " outside 1.." + std::to_string(space.truncation));
  for (const auto& [seq, w] : weights) {
    if (seq.size() != static_cast<std::size_t>(block_index))
      throw ValidationError("state holds a sequence of length " +
                            std::to_string(seq.size()) + " in block " +
                            std::to_string(block_index));
    for (TokenId id : seq) {
      if (id >= static_cast<TokenId>(space.vocab_size))
        throw ValidationError("state sequence uses unknown token id " +
                              std::to_string(id));
    }
    if (!(w >= 0.0))
      throw ValidationError("state has a negative or non-finite weight");
  }
  if (std::abs(weight_sum() - 1.0) > 1e-12)
    throw ValidationError("state weights sum to " +
                          std::to_string(weight_sum()) + ", expected 1");
}

SequenceEnsembleState input_state(const TokenSeq& text,
                                  const FockSpace& space) {
  if (text.empty()) throw ValidationError("input text must not be empty");
  if (text.size() > static_cast<std::size_t>(space.truncation))
    throw ValidationError("input text length " + std::to_string(text.size()) +
                          " exceeds the truncation " +
                          std::to_string(space.truncation));
  for (TokenId id : text) {
    if (id >= static_cast<TokenId>(space.vocab_size))
      throw ValidationError("input text uses unknown token id " +
                            std::to_string(id));
  }
  SequenceEnsembleState state;
  state.block_index = static_cast<int>(text.size());
  state.weights.emplace(text, 1.0);
  return state;
}

BlockDiagOperator to_dense(const SequenceEnsembleState& state,
                           const FockSpace& space) {
  state.check(space);
  require_dense(space.total_dim(), "to_dense");

  BlockDiagOperator op = BlockDiagOperator::zero(space);
  const auto dim = static_cast<Eigen::Index>(space.block_dim(state.block_index));
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [seq, w] : state.weights) {
    const auto idx = static_cast<Eigen::Index>(space.sequence_index(seq));
    diag(idx, idx) = w;
  }
  op.block(state.block_index) = std::move(diag);
  return op;
}

}  // namespace qlm
