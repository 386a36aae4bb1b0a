#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qlm/fock.hpp"
#include "qlm/transformer.hpp"
#include "qlm/vocab.hpp"

namespace qlm {

// The quantum operation built from one attention block: reads a basis
// sequence, appends the block's next-token outcome, and prepares the
// corresponding product projector. Realized explicitly in measure-and-prepare
// form, so it is completely positive by construction and trace preserving on
// every block it is defined on. The vacuum token is where the scalar
// component is sent; the sequential protocol never populates it.
struct QuantumOperation {
  AttentionBlock block;
  Embedding emb;
  TokenId vacuum_token;
  Scaling scaling;
  FockSpace space;
};

QuantumOperation make_operation(AttentionBlock block, Embedding emb,
                                TokenId vacuum_token, Scaling scaling,
                                FockSpace space);

// Action on one basis sequence of length n (1 <= n <= M-1): the ensemble over
// (x_1,...,x_n,y) weighted by the block's aggregated next-token
// probabilities. Shares the arithmetic path of next_token_distribution.
SequenceEnsembleState apply_phi(const QuantumOperation& chan,
                                const TokenSeq& sequence);

// Linear extension to ensembles: the weight-mixture of per-sequence actions,
// duplicate output sequences merged by weight addition.
SequenceEnsembleState apply_channel(const QuantumOperation& chan,
                                    const SequenceEnsembleState& state);

// Image of the scalar (vacuum) component: weight 1 on (vacuum_token).
SequenceEnsembleState vacuum_action(const QuantumOperation& chan);

// Explicit Kraus family of the measure-and-prepare channel, restricted to
// input blocks 0..max_input_block. Operators map the restricted input space
// (dimension input_dim) into blocks 0..max_input_block+1 (output_dim).
struct KrausSet {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::vector<Eigen::MatrixXcd> operators;
};

// One operator sqrt(p(seq,y)) |seq.y><seq| per basis sequence and reachable
// output token, plus |vacuum><scalar|. Satisfies sum K^dag K = identity on
// the restricted domain. Guarded by kDenseDimensionGuard.
KrausSet kraus_operators(const QuantumOperation& chan, int max_input_block);

// max-norm of (sum K^dag K - identity) on the restricted input space.
double trace_preservation_defect(const KrausSet& kraus);

// Choi matrix sum_K vec(K) vec(K)^dag with vec(K)[(o,i)] = K(o,i) at index
// o*input_dim + i. Hermitian and positive semidefinite for any Kraus family.
Eigen::MatrixXcd choi_matrix(const KrausSet& kraus);

// Minimum eigenvalue of the Choi matrix (the complete-positivity witness).
// Throws if the Choi matrix is non-Hermitian beyond 1e-10.
double verify_cp(const KrausSet& kraus);

// max-norm of (partial trace of choi over the output factor - identity).
double choi_output_trace_defect(const Eigen::MatrixXcd& choi,
                                std::size_t input_dim);

}  // namespace qlm
