#include "qlm/measurement.hpp"

#include <string>

namespace qlm {

namespace {

void require_probe(const PVM& pvm, const FockSpace& space) {
  if (pvm.base_block < 0 || pvm.base_block >= space.truncation)
    throw ValidationError("PVM base block " + std::to_string(pvm.base_block) +
                          " outside 0.." + std::to_string(space.truncation - 1));
}

}  // namespace

BlockDiagOperator no_token_projector(const PVM& pvm, const FockSpace& space) {
  require_probe(pvm, space);
  BlockDiagOperator op = BlockDiagOperator::identity(space);
  op.block(pvm.base_block + 1).reset();
  return op;
}

BlockDiagOperator token_projector(const PVM& pvm, TokenId outcome,
                                  const FockSpace& space) {
  require_probe(pvm, space);
  if (outcome >= static_cast<TokenId>(space.vocab_size))
    throw ValidationError("outcome token id " + std::to_string(outcome) +
                          " outside the vocabulary");

  const int probe = pvm.base_block + 1;
  const auto dim = static_cast<Eigen::Index>(space.block_dim(probe));
  const auto N = static_cast<std::size_t>(space.vocab_size);

  // I^(n) tensor |outcome><outcome|: picks basis sequences whose last token
  // (least significant digit) is the outcome.
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    if (static_cast<std::size_t>(idx) % N == outcome) diag(idx, idx) = 1.0;
  }

  BlockDiagOperator op = BlockDiagOperator::zero(space);
  op.block(probe) = std::move(diag);
  return op;
}

OutcomeDistribution outcome_probabilities(const PVM& pvm,
                                          const SequenceEnsembleState& state,
                                          const FockSpace& space) {
  require_probe(pvm, space);

  OutcomeDistribution dist;
  dist.token.assign(static_cast<std::size_t>(space.vocab_size), 0.0);
  if (state.block_index == pvm.base_block + 1) {
    for (const auto& [seq, w] : state.weights) dist.token[seq.back()] += w;
  } else {
    dist.no_token = state.weight_sum();
  }
  return dist;
}

SequenceEnsembleState luders_reduce(const PVM& pvm,
                                    const SequenceEnsembleState& state,
                                    TokenId outcome) {
  SequenceEnsembleState reduced;
  reduced.block_index = state.block_index;

  double total = 0.0;
  if (state.block_index == pvm.base_block + 1) {
    for (const auto& [seq, w] : state.weights) {
      if (seq.back() != outcome || w == 0.0) continue;
      reduced.weights.emplace(seq, w);
      total += w;
    }
  }
  if (total <= 0.0)
    throw ValidationError("cannot reduce on outcome with probability 0");
  for (auto& [seq, w] : reduced.weights) w /= total;
  return reduced;
}

namespace {

struct ProtocolContext {
  const TransformerStack& stack;
  const Embedding& emb;
  const FockSpace& space;
  std::vector<QuantumOperation> channels;
  int input_length = 0;
  const StepObserver* observer = nullptr;
};

ProtocolContext make_context(const TransformerStack& stack,
                             const TokenSeq& text, const Embedding& emb,
                             const FockSpace& space,
                             const StepObserver* observer) {
  ProtocolContext ctx{stack, emb, space, {}, static_cast<int>(text.size()),
                      observer};
  ctx.channels.reserve(stack.depth());
  for (const AttentionBlock& block : stack.blocks) {
    // The vacuum component is never populated in-protocol; token 0 is an
    // arbitrary placeholder.
    ctx.channels.push_back(
        make_operation(block, emb, TokenId{0}, stack.scaling, space));
  }
  return ctx;
}

void walk_outcomes(const ProtocolContext& ctx,
                   const SequenceEnsembleState& state, std::size_t step,
                   double probability, TokenSeq& outputs,
                   JointDistribution& out) {
  if (step == ctx.stack.depth()) {
    out.emplace(outputs, probability);
    return;
  }
  const SequenceEnsembleState post =
      apply_channel(ctx.channels[step], state);
  const PVM pvm{ctx.input_length + static_cast<int>(step)};
  const OutcomeDistribution dist = outcome_probabilities(pvm, post, ctx.space);
  if (ctx.observer && *ctx.observer)
    (*ctx.observer)(static_cast<int>(step), post, dist);

  for (TokenId y = 0; y < static_cast<TokenId>(dist.token.size()); ++y) {
    const double p = dist.token[y];
    if (p <= 0.0) continue;
    const SequenceEnsembleState reduced = luders_reduce(pvm, post, y);
    outputs.push_back(y);
    walk_outcomes(ctx, reduced, step + 1, probability * p, outputs, out);
    outputs.pop_back();
  }
}

}  // namespace

JointDistribution run_protocol(const TransformerStack& stack,
                               const TokenSeq& text, const Embedding& emb,
                               const StepObserver& observer) {
  if (text.empty()) throw ValidationError("text must not be empty");
  if (stack.depth() == 0)
    throw ValidationError("transformer stack must have at least one block");

  const FockSpace space(static_cast<int>(emb.count()),
                        static_cast<int>(text.size() + stack.depth()));
  const ProtocolContext ctx =
      make_context(stack, text, emb, space, &observer);

  JointDistribution out;
  TokenSeq outputs;
  walk_outcomes(ctx, input_state(text, space), 0, 1.0, outputs, out);
  return out;
}

namespace {

TrajectoryRecord run_one(const ProtocolContext& ctx, const TokenSeq& text,
                         Rng& rng) {
  TrajectoryRecord record;
  record.probability = 1.0;

  SequenceEnsembleState state = input_state(text, ctx.space);
  for (std::size_t step = 0; step < ctx.stack.depth(); ++step) {
    const SequenceEnsembleState post = apply_channel(ctx.channels[step], state);
    const PVM pvm{ctx.input_length + static_cast<int>(step)};
    const OutcomeDistribution dist = outcome_probabilities(pvm, post, ctx.space);
    if (dist.no_token != 0.0)
      throw std::logic_error("no-token outcome has nonzero probability");

    const TokenId outcome = static_cast<TokenId>(rng.sample_index(dist.token));
    record.outcomes.push_back(outcome);
    record.step_probabilities.push_back(dist.token[outcome]);
    record.probability *= dist.token[outcome];
    state = luders_reduce(pvm, post, outcome);
  }
  return record;
}

}  // namespace

TrajectoryRecord sample_trajectory(const TransformerStack& stack,
                                   const TokenSeq& text, const Embedding& emb,
                                   Rng& rng) {
  if (text.empty()) throw ValidationError("text must not be empty");
  if (stack.depth() == 0)
    throw ValidationError("transformer stack must have at least one block");

  const FockSpace space(static_cast<int>(emb.count()),
                        static_cast<int>(text.size() + stack.depth()));
  const ProtocolContext ctx = make_context(stack, text, emb, space, nullptr);
  return run_one(ctx, text, rng);
}

std::map<TokenSeq, std::uint64_t> sample_protocol(const TransformerStack& stack,
                                                  const TokenSeq& text,
                                                  const Embedding& emb,
                                                  std::uint64_t seed,
                                                  std::uint64_t trajectories) {
  if (trajectories < 1)
    throw ValidationError("trajectory count must be >= 1");
  if (text.empty()) throw ValidationError("text must not be empty");
  if (stack.depth() == 0)
    throw ValidationError("transformer stack must have at least one block");

  const FockSpace space(static_cast<int>(emb.count()),
                        static_cast<int>(text.size() + stack.depth()));
  const ProtocolContext ctx = make_context(stack, text, emb, space, nullptr);

  std::map<TokenSeq, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < trajectories; ++t) {
    Rng rng(derive_seed(seed, t));
    ++counts[run_one(ctx, text, rng).outcomes];
  }
  return counts;
}

}  // namespace qlm
