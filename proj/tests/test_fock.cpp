#include <doctest.h>

#include <complex>
#include <random>

#include "model_gen.hpp"
#include "qlm/fock.hpp"

using namespace qlm;

TEST_CASE("fock space dimensions and indexing") {
  const FockSpace space(2, 3);
  CHECK(space.block_dim(0) == 1);
  CHECK(space.block_dim(2) == 4);
  CHECK(space.block_offset(0) == 0);
  CHECK(space.block_offset(1) == 1);
  CHECK(space.block_offset(3) == 7);
  CHECK(space.total_dim() == 15);

  // Big-endian: the first token is the most significant digit.
  CHECK(space.sequence_index({0, 1}) == 1);
  CHECK(space.sequence_index({1, 0}) == 2);
  CHECK(space.sequence_index({1, 1, 1}) == 7);

  CHECK_THROWS_AS(space.sequence_index({0, 0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(space.sequence_index({2}), ValidationError);
  CHECK_THROWS_AS(FockSpace(0, 1), ValidationError);
  CHECK_THROWS_AS(FockSpace(2, 0), ValidationError);

  const FockSpace unary(1, 4);  // single-token vocabulary
  CHECK(unary.total_dim() == 5);
  CHECK(unary.sequence_index({0, 0, 0}) == 0);
}

TEST_CASE("input_state places weight 1 at the text's block") {
  const FockSpace space(2, 6);
  const SequenceEnsembleState state = input_state({0, 1, 0}, space);
  CHECK(state.block_index == 3);
  REQUIRE(state.weights.size() == 1);
  CHECK(state.weights.at({0, 1, 0}) == 1.0);
  state.check(space);

  const FockSpace tiny(2, 1);
  const SequenceEnsembleState minimal = input_state({0}, tiny);
  CHECK(minimal.block_index == 1);
  CHECK(minimal.weights.at({0}) == 1.0);

  CHECK_THROWS_AS(input_state({0, 1}, tiny), ValidationError);  // n = M+1
  CHECK_THROWS_AS(input_state({}, space), ValidationError);
}

TEST_CASE("to_dense produces the diagonal weight matrix in the right block") {
  const FockSpace space(2, 1);
  const BlockDiagOperator op = to_dense(input_state({0}, space), space);
  CHECK(op.scalar == std::complex<double>(0.0, 0.0));
  REQUIRE(op.block(1).has_value());
  const Eigen::MatrixXcd full = op.full_matrix(space);
  REQUIRE(full.rows() == 3);
  CHECK(full(1, 1) == std::complex<double>(1.0, 0.0));
  CHECK(full.cwiseAbs().sum() == 1.0);  // single nonzero entry
}

TEST_CASE("to_dense of the example's reduced state is a rank-1 projector") {
  const FockSpace space(2, 6);
  SequenceEnsembleState reduced;
  reduced.block_index = 4;
  reduced.weights.emplace(TokenSeq{0, 1, 0, 1}, 1.0);

  const BlockDiagOperator op = to_dense(reduced, space);
  const auto& block = op.block(4);
  REQUIRE(block.has_value());
  CHECK(block->rows() == 16);
  // (x0,x1,x0,x1) = binary 0101 = index 5 within block 4.
  CHECK((*block)(5, 5) == std::complex<double>(1.0, 0.0));
  CHECK(block->cwiseAbs().sum() == 1.0);
  CHECK(std::abs(op.trace() - 1.0) <= 1e-12);
  // Idempotent and Hermitian: a projector.
  CHECK(((*block) * (*block) - (*block)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trace of identity counts dimensions; states have trace 1") {
  const FockSpace space(2, 2);
  CHECK(BlockDiagOperator::identity(space).trace() ==
        std::complex<double>(7.0, 0.0));  // 1 + 2 + 4

  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 10; ++rep) {
    const FockSpace s(2 + static_cast<int>(gen() % 2), 3);
    SequenceEnsembleState state;
    state.block_index = 2;
    // Random ensemble over block 2, normalized.
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      TokenSeq seq{static_cast<TokenId>(gen() % static_cast<unsigned>(s.vocab_size)),
                   static_cast<TokenId>(gen() % static_cast<unsigned>(s.vocab_size))};
      const double w = 1.0 + static_cast<double>(gen() % 5);
      state.weights[seq] += w;
      total += w;
    }
    for (auto& [seq, w] : state.weights) w /= total;

    CHECK(std::abs(to_dense(state, s).trace() - 1.0) <= 1e-12);
  }
}

TEST_CASE("trace matches a naive diagonal-sum oracle on random operators") {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  const FockSpace space(2, 3);

  BlockDiagOperator op = BlockDiagOperator::zero(space);
  op.scalar = std::complex<double>(normal(gen), 0.0);
  for (int n = 1; n <= 3; ++n) {
    const auto dim = static_cast<Eigen::Index>(space.block_dim(n));
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c)
        m(r, c) = std::complex<double>(normal(gen), normal(gen));
    m = ((m + m.adjoint()) / 2.0).eval();  // Hermitian
    op.block(n) = std::move(m);
  }

  const Eigen::MatrixXcd full = op.full_matrix(space);
  std::complex<double> naive{0.0, 0.0};
  for (Eigen::Index i = 0; i < full.rows(); ++i) naive += full(i, i);
  CHECK(std::abs(op.trace() - naive) <= 1e-12);
  CHECK(std::abs(op.trace().imag()) <= 1e-12);  // Hermitian operators
}

TEST_CASE("round trip preserves trace and positivity") {
  std::mt19937_64 gen(29);
  for (int rep = 0; rep < 20; ++rep) {
    const int N = 2 + static_cast<int>(gen() % 2);
    const FockSpace space(N, 3);
    SequenceEnsembleState state;
    state.block_index = 1 + static_cast<int>(gen() % 3);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      TokenSeq seq(static_cast<std::size_t>(state.block_index));
      for (auto& id : seq)
        id = static_cast<TokenId>(gen() % static_cast<unsigned>(N));
      const double w = static_cast<double>(gen() % 7);
      state.weights[seq] += w;
      total += w;
    }
    if (total == 0.0) {
      state.weights[TokenSeq(static_cast<std::size_t>(state.block_index), 0)] =
          1.0;
      total = 1.0;
    }
    for (auto& [seq, w] : state.weights) w /= total;

    const BlockDiagOperator dense = to_dense(state, space);
    CHECK(std::abs(dense.trace() - 1.0) <= 1e-12);
    const Eigen::MatrixXcd full = dense.full_matrix(space);
    for (Eigen::Index i = 0; i < full.rows(); ++i) {
      CHECK(full(i, i).real() >= 0.0);
      CHECK(full(i, i).imag() == 0.0);
    }
  }
}

TEST_CASE("operators in different blocks compose to zero") {
  const FockSpace space(2, 3);
  SequenceEnsembleState a, b;
  a.block_index = 1;
  a.weights.emplace(TokenSeq{0}, 1.0);
  b.block_index = 2;
  b.weights.emplace(TokenSeq{1, 1}, 1.0);

  const Eigen::MatrixXcd prod = to_dense(a, space).full_matrix(space) *
                                to_dense(b, space).full_matrix(space);
  CHECK(prod.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse expectations equal dense trace pairings") {
  // For observables diagonal in the product basis, the weighted sum over the
  // ensemble equals Tr[O rho] on the dense forms.
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const FockSpace space(2, 3);

  for (int rep = 0; rep < 10; ++rep) {
    SequenceEnsembleState state;
    state.block_index = 2;
    double total = 0.0;
    for (TokenId x : {0u, 1u})
      for (TokenId y : {0u, 1u}) {
        const double w = uniform(gen);
        state.weights[{x, y}] = w;
        total += w;
      }
    for (auto& [seq, w] : state.weights) w /= total;

    // Random diagonal observable on block 2.
    Eigen::MatrixXcd obs = Eigen::MatrixXcd::Zero(4, 4);
    std::map<TokenSeq, double> obs_values;
    for (TokenId x : {0u, 1u})
      for (TokenId y : {0u, 1u}) {
        const double v = uniform(gen) * 10.0 - 5.0;
        obs_values[{x, y}] = v;
        const auto idx =
            static_cast<Eigen::Index>(space.sequence_index({x, y}));
        obs(idx, idx) = v;
      }
    BlockDiagOperator observable = BlockDiagOperator::zero(space);
    observable.block(2) = obs;

    double sparse = 0.0;
    for (const auto& [seq, w] : state.weights) sparse += w * obs_values[seq];

    const std::complex<double> dense =
        (observable.full_matrix(space) *
         to_dense(state, space).full_matrix(space))
            .trace();
    CHECK(std::abs(dense - sparse) <= 1e-12);
  }
}

TEST_CASE("dense guard rejects oversized spaces") {
  const FockSpace big(4, 7);  // total dim 21845
  CHECK(big.total_dim() > kDenseDimensionGuard);
  CHECK_THROWS_AS(to_dense(input_state({0}, big), big), ValidationError);
  CHECK_THROWS_AS(BlockDiagOperator::identity(big), ValidationError);
}
