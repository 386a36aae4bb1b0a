#include "qlm/channel.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace qlm {

namespace {

void require_dense(std::size_t dim, const char* what) {
  if (dim > kDenseDimensionGuard)
    throw ValidationError(std::string(what) + ": dimension " +
                          std::to_string(dim) + " exceeds the dense guard " +
                          std::to_string(kDenseDimensionGuard));
}

// Lexicographic enumeration of every length-n sequence over the vocabulary,
// in block-index order.
template <typename F>
void for_each_sequence(int vocab_size, int length, F&& visit) {
  TokenSeq seq(static_cast<std::size_t>(length), 0);
  while (true) {
    visit(seq);
    int pos = length - 1;
    while (pos >= 0 &&
           seq[static_cast<std::size_t>(pos)] + 1 ==
               static_cast<TokenId>(vocab_size)) {
      seq[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
    ++seq[static_cast<std::size_t>(pos)];
  }
}

}  // namespace

QuantumOperation make_operation(AttentionBlock block, Embedding emb,
                                TokenId vacuum_token, Scaling scaling,
                                FockSpace space) {
  if (vacuum_token >= emb.count())
    throw ValidationError("vacuum token id " + std::to_string(vacuum_token) +
                          " outside the vocabulary");
  if (static_cast<std::size_t>(space.vocab_size) != emb.count())
    throw ValidationError("Fock space vocabulary size " +
                          std::to_string(space.vocab_size) +
                          " does not match the embedding (" +
                          std::to_string(emb.count()) + " tokens)");
  return QuantumOperation{std::move(block), std::move(emb), vacuum_token,
                          scaling, space};
}

SequenceEnsembleState apply_phi(const QuantumOperation& chan,
                                const TokenSeq& sequence) {
  if (sequence.empty())
    throw ValidationError("channel input sequence must not be empty");
  if (sequence.size() >= static_cast<std::size_t>(chan.space.truncation))
    throw ValidationError(
        "channel input at block " + std::to_string(sequence.size()) +
        " would write past the truncation " +
        std::to_string(chan.space.truncation));

  // Same arithmetic path as the classical reference.
  const TokenDistribution next =
      next_token_distribution(chan.block, sequence, chan.emb, chan.scaling);

  SequenceEnsembleState out;
  out.block_index = static_cast<int>(sequence.size()) + 1;
  TokenSeq extended = sequence;
  extended.push_back(0);
  for (const auto& [token, p] : next) {
    extended.back() = token;
    out.weights.emplace(extended, p);
  }
  return out;
}

SequenceEnsembleState apply_channel(const QuantumOperation& chan,
                                    const SequenceEnsembleState& state) {
  if (state.block_index >= chan.space.truncation)
    throw ValidationError("state at block " +
                          std::to_string(state.block_index) +
                          " would write past the truncation " +
                          std::to_string(chan.space.truncation));

  SequenceEnsembleState out;
  out.block_index = state.block_index + 1;
  for (const auto& [seq, w] : state.weights) {
    if (w == 0.0) continue;
    const SequenceEnsembleState part = apply_phi(chan, seq);
    for (const auto& [ext, p] : part.weights) out.weights[ext] += w * p;
  }
  return out;
}

SequenceEnsembleState vacuum_action(const QuantumOperation& chan) {
  SequenceEnsembleState out;
  out.block_index = 1;
  out.weights.emplace(TokenSeq{chan.vacuum_token}, 1.0);
  return out;
}

KrausSet kraus_operators(const QuantumOperation& chan, int max_input_block) {
  const FockSpace& space = chan.space;
  if (max_input_block < 1 || max_input_block >= space.truncation)
    throw ValidationError("max input block " +
                          std::to_string(max_input_block) +
                          " outside 1.." + std::to_string(space.truncation - 1));

  const std::size_t input_dim =
      space.block_offset(max_input_block) + space.block_dim(max_input_block);
  const std::size_t output_dim = space.block_offset(max_input_block + 1) +
                                 space.block_dim(max_input_block + 1);
  require_dense(output_dim, "kraus_operators");

  KrausSet set;
  set.input_dim = input_dim;
  set.output_dim = output_dim;

  const auto rows = static_cast<Eigen::Index>(output_dim);
  const auto cols = static_cast<Eigen::Index>(input_dim);

  // Scalar component: measure the vacuum, prepare |vacuum_token> in block 1.
  Eigen::MatrixXcd vacuum = Eigen::MatrixXcd::Zero(rows, cols);
  vacuum(static_cast<Eigen::Index>(space.block_offset(1) + chan.vacuum_token),
         0) = 1.0;
  set.operators.push_back(std::move(vacuum));

  for (int n = 1; n <= max_input_block; ++n) {
    const std::size_t in_offset = space.block_offset(n);
    const std::size_t out_offset = space.block_offset(n + 1);
    for_each_sequence(space.vocab_size, n, [&](const TokenSeq& seq) {
      const std::size_t col = in_offset + space.sequence_index(seq);
      const SequenceEnsembleState image = apply_phi(chan, seq);
      for (const auto& [ext, p] : image.weights) {
        if (p <= 0.0) continue;
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(rows, cols);
        k(static_cast<Eigen::Index>(out_offset + space.sequence_index(ext)),
          static_cast<Eigen::Index>(col)) = std::sqrt(p);
        set.operators.push_back(std::move(k));
      }
    });
  }
  return set;
}

double trace_preservation_defect(const KrausSet& kraus) {
  const auto dim = static_cast<Eigen::Index>(kraus.input_dim);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : kraus.operators) sum += k.adjoint() * k;
  return (sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd choi_matrix(const KrausSet& kraus) {
  const std::size_t dim = kraus.output_dim * kraus.input_dim;
  require_dense(dim, "choi_matrix");

  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Eigen::VectorXcd vec(static_cast<Eigen::Index>(dim));
  for (const auto& k : kraus.operators) {
    for (std::size_t o = 0; o < kraus.output_dim; ++o) {
      for (std::size_t i = 0; i < kraus.input_dim; ++i) {
        vec[static_cast<Eigen::Index>(o * kraus.input_dim + i)] =
            k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));
      }
    }
    choi.noalias() += vec * vec.adjoint();
  }
  return choi;
}

double verify_cp(const KrausSet& kraus) {
  const Eigen::MatrixXcd choi = choi_matrix(kraus);
  const double hermiticity_defect =
      (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  if (hermiticity_defect > 1e-10)
    throw std::logic_error("Choi matrix non-Hermitian by " +
                           std::to_string(hermiticity_defect));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      choi, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::logic_error("Choi eigensolver failed to converge");
  return solver.eigenvalues().minCoeff();
}

double choi_output_trace_defect(const Eigen::MatrixXcd& choi,
                                std::size_t input_dim) {
  if (input_dim == 0 ||
      choi.rows() % static_cast<Eigen::Index>(input_dim) != 0 ||
      choi.rows() != choi.cols())
    throw ValidationError("Choi matrix shape does not match the input dimension");
  const std::size_t output_dim =
      static_cast<std::size_t>(choi.rows()) / input_dim;

  const auto dim = static_cast<Eigen::Index>(input_dim);
  Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t o = 0; o < output_dim; ++o) {
    const auto base = static_cast<Eigen::Index>(o * input_dim);
    reduced += choi.block(base, base, dim, dim);
  }
  return (reduced - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

}  // namespace qlm
