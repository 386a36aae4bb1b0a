#include "qlm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "qlm/fock.hpp"
#include "qlm/measurement.hpp"

namespace qlm {

ComparisonReport compare(const JointDistribution& classical,
                         const JointDistribution& quantum) {
  std::set<TokenSeq> outcomes;
  for (const auto& [seq, p] : classical) outcomes.insert(seq);
  for (const auto& [seq, p] : quantum) outcomes.insert(seq);

  ComparisonReport report;
  for (const TokenSeq& seq : outcomes) {
    const auto c = classical.find(seq);
    const auto q = quantum.find(seq);
    OutcomeRow row;
    row.text = seq;
    row.classical = c == classical.end() ? 0.0 : c->second;
    row.quantum = q == quantum.end() ? 0.0 : q->second;
    row.diff = row.quantum - row.classical;
    report.total_variation += 0.5 * std::abs(row.diff);
    report.max_abs_diff = std::max(report.max_abs_diff, std::abs(row.diff));
    report.per_outcome.push_back(std::move(row));
  }
  return report;
}

GoldenReport golden_example() {
  const Model model = example_model();
  const TokenSeq text = parse_text(model.vocab, kExampleInput);
  const double e = std::exp(1.0);

  GoldenReport report;
  auto check = [&report](std::string name, double expected, double actual) {
    report.checks.push_back(GoldenCheck{std::move(name), expected, actual});
  };

  // Walk the measurement tree by hand to read off the six conditionals.
  const FockSpace space(static_cast<int>(model.vocab.size()),
                        static_cast<int>(text.size() + model.stack.depth()));
  const auto op1 = make_operation(model.stack.blocks[0], model.emb,
                                  model.vacuum_token, model.stack.scaling,
                                  space);
  const auto op2 = make_operation(model.stack.blocks[1], model.emb,
                                  model.vacuum_token, model.stack.scaling,
                                  space);

  const PVM first{static_cast<int>(text.size())};
  const PVM second{static_cast<int>(text.size()) + 1};

  const SequenceEnsembleState post1 = apply_channel(op1, input_state(text, space));
  const OutcomeDistribution step1 = outcome_probabilities(first, post1, space);
  check("P(step1 -> x0)", 2.0 / (e + 2.0), step1.token[0]);
  check("P(step1 -> x1)", e / (e + 2.0), step1.token[1]);

  const SequenceEnsembleState branch0 = luders_reduce(first, post1, 0);
  const OutcomeDistribution step2a =
      outcome_probabilities(second, apply_channel(op2, branch0), space);
  check("P(step2 -> x0 | x0)", 1.0 / (3.0 * e + 1.0), step2a.token[0]);
  check("P(step2 -> x1 | x0)", 3.0 * e / (3.0 * e + 1.0), step2a.token[1]);

  const SequenceEnsembleState branch1 = luders_reduce(first, post1, 1);
  const OutcomeDistribution step2b =
      outcome_probabilities(second, apply_channel(op2, branch1), space);
  check("P(step2 -> x0 | x1)", e / (e + 1.0), step2b.token[0]);
  check("P(step2 -> x1 | x1)", 1.0 / (e + 1.0), step2b.token[1]);

  report.joint = run_protocol(model.stack, text, model.emb);
  check("P(x0 x0)", 2.0 / ((e + 2.0) * (3.0 * e + 1.0)),
        report.joint.at(TokenSeq{0, 0}));
  check("P(x0 x1)", 6.0 * e / ((e + 2.0) * (3.0 * e + 1.0)),
        report.joint.at(TokenSeq{0, 1}));
  check("P(x1 x0)", e * e / ((e + 2.0) * (e + 1.0)),
        report.joint.at(TokenSeq{1, 0}));
  check("P(x1 x1)", e / ((e + 2.0) * (e + 1.0)),
        report.joint.at(TokenSeq{1, 1}));

  report.all_pass = true;
  for (const GoldenCheck& c : report.checks) {
    if (!(std::abs(c.error()) <= report.tolerance)) report.all_pass = false;
  }
  return report;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

jsonout::Object manifest_object(const RunManifest& manifest) {
  return jsonout::Object{
      {"config_digest", manifest.config_digest},
      {"input", manifest.input},
      {"scaling", manifest.scaling},
      {"truncation", static_cast<std::int64_t>(manifest.truncation)},
      {"seed", manifest.seed},
      {"version", manifest.version},
  };
}

std::string result_document(const RunManifest& manifest,
                            const Vocabulary& vocab,
                            const JointDistribution* distribution,
                            jsonout::Value report) {
  jsonout::Value dist_value;  // null when absent
  if (distribution) {
    std::map<std::string, double> by_text;
    for (const auto& [seq, p] : *distribution)
      by_text.emplace(format_text(vocab, seq), p);
    jsonout::Object entries;
    for (const auto& [key, p] : by_text) entries.emplace_back(key, p);
    dist_value = std::move(entries);
  }
  return jsonout::Value(jsonout::Object{
                            {"manifest", manifest_object(manifest)},
                            {"distribution", std::move(dist_value)},
                            {"report", std::move(report)},
                        })
      .dump();
}

jsonout::Object comparison_object(const ComparisonReport& report,
                                  const Vocabulary& vocab, double threshold) {
  std::map<std::string, const OutcomeRow*> rows;
  for (const OutcomeRow& row : report.per_outcome)
    rows.emplace(format_text(vocab, row.text), &row);

  jsonout::Array per_outcome;
  for (const auto& [text, row] : rows) {
    per_outcome.push_back(jsonout::Object{
        {"text", text},
        {"classical", row->classical},
        {"quantum", row->quantum},
        {"diff", row->diff},
    });
  }
  return jsonout::Object{
      {"total_variation", report.total_variation},
      {"max_abs_diff", report.max_abs_diff},
      {"threshold", threshold},
      {"pass", report.total_variation <= threshold},
      {"per_outcome", std::move(per_outcome)},
  };
}

}  // namespace qlm
