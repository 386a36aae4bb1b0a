#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "qlm/channel.hpp"
#include "qlm/fock.hpp"
#include "qlm/rng.hpp"
#include "qlm/transformer.hpp"

namespace qlm {

// Projector-valued measurement over the outcome set {no-token} + vocabulary.
// The token projectors probe block base_block+1 and read its last tensor
// factor; the no-token projector covers every other block plus the scalar.
struct PVM {
  int base_block = 0;
};

// Dense projectors, for completeness/orthogonality verification at tiny
// sizes. Requires 0 <= base_block <= M-1.
BlockDiagOperator no_token_projector(const PVM& pvm, const FockSpace& space);
BlockDiagOperator token_projector(const PVM& pvm, TokenId outcome,
                                  const FockSpace& space);

// Outcome probabilities of one measurement. no_token + sum(token) = 1
// within 1e-12 for a valid state.
struct OutcomeDistribution {
  double no_token = 0.0;
  std::vector<double> token;  // indexed by TokenId
};

OutcomeDistribution outcome_probabilities(const PVM& pvm,
                                          const SequenceEnsembleState& state,
                                          const FockSpace& space);

// Post-measurement update for a token outcome: keeps the sequences ending in
// that token, renormalized. Throws ValidationError on a zero-probability
// outcome.
SequenceEnsembleState luders_reduce(const PVM& pvm,
                                    const SequenceEnsembleState& state,
                                    TokenId outcome);

// One sampled run through the sequential measurements.
struct TrajectoryRecord {
  TokenSeq outcomes;
  double probability;  // product of step_probabilities
  std::vector<double> step_probabilities;
};

// Called once per (branch, step) with the post-channel state and its
// measurement statistics; used by diagnostics and tests.
using StepObserver = std::function<void(
    int step, const SequenceEnsembleState& post_channel,
    const OutcomeDistribution& outcome_dist)>;

// Exact enumeration of the sequential measurement protocol: prepare the
// input state at block n, then for each step apply the block's channel,
// measure the freshly written block, Lueders-reduce on each positive-
// probability outcome and recurse. The entry for (y_1,...,y_L) is the
// product of its step probabilities. Truncation is n+L; zero-probability
// branches are pruned; outcomes iterate in token-id order.
JointDistribution run_protocol(const TransformerStack& stack,
                               const TokenSeq& text, const Embedding& emb,
                               const StepObserver& observer = {});

// One measurement trajectory driven by an explicit uniform stream.
TrajectoryRecord sample_trajectory(const TransformerStack& stack,
                                   const TokenSeq& text, const Embedding& emb,
                                   Rng& rng);

// Monte-Carlo counterpart of run_protocol: trajectory t uses the stream
// derive_seed(seed, t). Counts sum to the trajectory count.
std::map<TokenSeq, std::uint64_t> sample_protocol(const TransformerStack& stack,
                                                  const TokenSeq& text,
                                                  const Embedding& emb,
                                                  std::uint64_t seed,
                                                  std::uint64_t trajectories);

}  // namespace qlm
