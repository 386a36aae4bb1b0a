#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qlm/jsonout.hpp"
#include "qlm/model_config.hpp"
#include "qlm/transformer.hpp"

namespace qlm {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

// Default ceiling on the classical/quantum total variation distance.
inline constexpr double kDefaultCompareThreshold = 1e-10;

struct OutcomeRow {
  TokenSeq text;
  double classical = 0.0;
  double quantum = 0.0;
  double diff = 0.0;  // quantum - classical
};

// Elementwise comparison of two joint tables over the union of their
// outcomes; missing entries count as 0.
struct ComparisonReport {
  double total_variation = 0.0;  // half the L1 distance
  double max_abs_diff = 0.0;
  std::vector<OutcomeRow> per_outcome;  // sorted by outcome text
};

ComparisonReport compare(const JointDistribution& classical,
                         const JointDistribution& quantum);

struct GoldenCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;

  double error() const { return actual - expected; }
};

// The built-in example run: the six conditional probabilities along the
// measurement tree plus the four joint probabilities, each against its
// closed form. all_pass requires |actual - expected| <= tolerance on every
// check.
struct GoldenReport {
  double tolerance = 1e-12;
  std::vector<GoldenCheck> checks;  // exactly 10
  JointDistribution joint;          // protocol output
  bool all_pass = false;
};

GoldenReport golden_example();

// Everything needed to bit-reproduce a run. Deliberately carries no
// timestamp: identical inputs give byte-identical result documents.
struct RunManifest {
  std::string config_digest;  // fnv1a64 of the raw config bytes
  std::string input;
  std::string scaling;
  int truncation = 0;
  std::uint64_t seed = 0;
  std::string version{kArtifactVersion};
};

// FNV-1a 64-bit, as a 16-digit lowercase hex string.
std::string fnv1a64_hex(std::string_view bytes);

jsonout::Object manifest_object(const RunManifest& manifest);

// {"manifest": ..., "distribution": ..., "report": ...}. The distribution
// keys are space-joined token symbols in lexicographic order.
std::string result_document(const RunManifest& manifest,
                            const Vocabulary& vocab,
                            const JointDistribution* distribution,
                            jsonout::Value report);

jsonout::Object comparison_object(const ComparisonReport& report,
                                  const Vocabulary& vocab, double threshold);

}  // namespace qlm
