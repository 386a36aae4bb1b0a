#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qlm/channel.hpp"
#include "qlm/harness.hpp"
#include "qlm/measurement.hpp"
#include "qlm/model_config.hpp"

namespace {

using namespace qlm;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitFailure = 2;

struct LoadedModel {
  Model model;
  std::string digest;
};

LoadedModel load_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  return LoadedModel{load_model_string(bytes), fnv1a64_hex(bytes)};
}

void emit(const std::string& document, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << document;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + out_path);
  out << document;
}

int cmd_run(const std::string& config_path, const std::string& input,
            const std::string& mode, double threshold,
            const std::string& out_path) {
  const LoadedModel loaded = load_from_file(config_path);
  const Model& model = loaded.model;
  const TokenSeq text = parse_text(model.vocab, input);

  RunManifest manifest;
  manifest.config_digest = loaded.digest;
  manifest.input = format_text(model.vocab, text);
  manifest.scaling = to_string(model.stack.scaling);
  manifest.truncation =
      static_cast<int>(text.size() + model.stack.depth());

  if (mode == "classical") {
    const JointDistribution dist =
        joint_distribution(model.stack, text, model.emb);
    emit(result_document(manifest, model.vocab, &dist, nullptr), out_path);
    return kExitOk;
  }
  if (mode == "quantum") {
    const JointDistribution dist = run_protocol(model.stack, text, model.emb);
    emit(result_document(manifest, model.vocab, &dist, nullptr), out_path);
    return kExitOk;
  }

  const JointDistribution classical =
      joint_distribution(model.stack, text, model.emb);
  const JointDistribution quantum = run_protocol(model.stack, text, model.emb);
  const ComparisonReport report = compare(classical, quantum);
  emit(result_document(manifest, model.vocab, &quantum,
                       comparison_object(report, model.vocab, threshold)),
       out_path);
  return report.total_variation <= threshold ? kExitOk : kExitFailure;
}

int cmd_sample(const std::string& config_path, const std::string& input,
               std::uint64_t trajectories, std::uint64_t seed,
               const std::string& out_path) {
  const LoadedModel loaded = load_from_file(config_path);
  const Model& model = loaded.model;
  const TokenSeq text = parse_text(model.vocab, input);

  const auto counts =
      sample_protocol(model.stack, text, model.emb, seed, trajectories);
  const JointDistribution exact = run_protocol(model.stack, text, model.emb);

  JointDistribution frequencies;
  double chi_square = 0.0;
  std::size_t support = 0;
  for (const auto& [seq, p] : exact) {
    if (p <= 0.0) continue;
    ++support;
    const auto it = counts.find(seq);
    const double observed =
        it == counts.end() ? 0.0 : static_cast<double>(it->second);
    frequencies[seq] = observed / static_cast<double>(trajectories);
    const double expected = p * static_cast<double>(trajectories);
    chi_square += (observed - expected) * (observed - expected) / expected;
  }

  RunManifest manifest;
  manifest.config_digest = loaded.digest;
  manifest.input = format_text(model.vocab, text);
  manifest.scaling = to_string(model.stack.scaling);
  manifest.truncation = static_cast<int>(text.size() + model.stack.depth());
  manifest.seed = seed;

  std::map<std::string, std::uint64_t> counts_by_text;
  for (const auto& [seq, c] : counts)
    counts_by_text.emplace(format_text(model.vocab, seq), c);
  jsonout::Object counts_obj;
  for (const auto& [key, c] : counts_by_text) counts_obj.emplace_back(key, c);

  jsonout::Object report{
      {"trajectories", trajectories},
      {"chi_square", chi_square},
      {"chi_square_df", static_cast<std::int64_t>(support) - 1},
      {"counts", std::move(counts_obj)},
  };
  emit(result_document(manifest, model.vocab, &frequencies, std::move(report)),
       out_path);
  return kExitOk;
}

int cmd_example(const std::string& out_path) {
  const GoldenReport report = golden_example();
  const Model model = example_model();

  std::printf("golden example: input \"%s\", scaling %s\n",
              std::string(kExampleInput).c_str(),
              to_string(model.stack.scaling).c_str());
  std::printf("%-22s %-22s %-22s %s\n", "check", "expected", "actual",
              "|error|");
  for (const GoldenCheck& c : report.checks) {
    std::printf("%-22s %-22.17g %-22.17g %.3g\n", c.name.c_str(), c.expected,
                c.actual, std::abs(c.error()));
  }
  std::printf("joint distribution:\n");
  for (const auto& [seq, p] : report.joint) {
    std::printf("  %-8s %.17g\n", format_text(model.vocab, seq).c_str(), p);
  }
  std::printf("result: %s (%zu checks, tolerance %g)\n",
              report.all_pass ? "pass" : "FAIL", report.checks.size(),
              report.tolerance);

  if (!out_path.empty()) {
    RunManifest manifest;
    manifest.config_digest = fnv1a64_hex(example_config_json());
    manifest.input = std::string(kExampleInput);
    manifest.scaling = to_string(model.stack.scaling);
    manifest.truncation = 5;

    jsonout::Array checks;
    for (const GoldenCheck& c : report.checks) {
      checks.push_back(jsonout::Object{
          {"name", c.name},
          {"expected", c.expected},
          {"actual", c.actual},
          {"error", c.error()},
          {"pass", std::abs(c.error()) <= report.tolerance},
      });
    }
    jsonout::Object body{
        {"tolerance", report.tolerance},
        {"checks", std::move(checks)},
        {"all_pass", report.all_pass},
    };
    emit(result_document(manifest, model.vocab, &report.joint,
                         std::move(body)),
         out_path);
  }
  return report.all_pass ? kExitOk : kExitFailure;
}

int cmd_choi(const std::string& config_path, int max_block,
             const std::string& out_path) {
  const LoadedModel loaded = load_from_file(config_path);
  const Model& model = loaded.model;
  if (max_block < 1)
    throw ValidationError("--max-block must be >= 1");

  const FockSpace space(static_cast<int>(model.vocab.size()), max_block + 1);
  constexpr double kEigTolerance = -1e-10;
  constexpr double kDefectTolerance = 1e-10;

  bool all_pass = true;
  jsonout::Array rows;
  for (std::size_t l = 0; l < model.stack.depth(); ++l) {
    const auto op = make_operation(model.stack.blocks[l], model.emb,
                                   model.vacuum_token, model.stack.scaling,
                                   space);
    const KrausSet kraus = kraus_operators(op, max_block);
    const double min_eig = verify_cp(kraus);
    const double tp_defect = trace_preservation_defect(kraus);
    const double choi_defect =
        choi_output_trace_defect(choi_matrix(kraus), kraus.input_dim);
    const bool pass = min_eig >= kEigTolerance &&
                      tp_defect <= kDefectTolerance &&
                      choi_defect <= kDefectTolerance;
    all_pass = all_pass && pass;
    rows.push_back(jsonout::Object{
        {"block", static_cast<std::int64_t>(l + 1)},
        {"kraus_operators", static_cast<std::int64_t>(kraus.operators.size())},
        {"input_dim", static_cast<std::int64_t>(kraus.input_dim)},
        {"output_dim", static_cast<std::int64_t>(kraus.output_dim)},
        {"min_choi_eigenvalue", min_eig},
        {"trace_preservation_defect", tp_defect},
        {"choi_output_trace_defect", choi_defect},
        {"pass", pass},
    });
    std::printf(
        "block %zu: %zu Kraus operators (%zu -> %zu), min Choi eigenvalue "
        "%.3e, trace defect %.3e: %s\n",
        l + 1, kraus.operators.size(), kraus.input_dim, kraus.output_dim,
        min_eig, std::max(tp_defect, choi_defect), pass ? "pass" : "FAIL");
  }

  if (!out_path.empty()) {
    RunManifest manifest;
    manifest.config_digest = loaded.digest;
    manifest.scaling = to_string(model.stack.scaling);
    manifest.truncation = max_block + 1;
    jsonout::Object body{
        {"max_block", static_cast<std::int64_t>(max_block)},
        {"blocks", std::move(rows)},
        {"all_pass", all_pass},
    };
    emit(result_document(manifest, model.vocab, nullptr, std::move(body)),
         out_path);
  }
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact simulator for a toy decoder-only transformer and its "
      "realization as sequentially measured quantum channels on a truncated "
      "Fock space"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input;
  std::string mode = "compare";
  std::string out_path;
  double threshold = kDefaultCompareThreshold;
  std::uint64_t trajectories = 100000;
  std::uint64_t seed = 0;
  int max_block = 3;

  CLI::App* run = app.add_subcommand(
      "run", "Compute the joint output distribution of an input text");
  run->add_option("--config", config_path, "model config JSON")->required();
  run->add_option("--input", input, "input text (space-separated symbols)")
      ->required();
  run->add_option("--mode", mode, "classical|quantum|compare")
      ->check(CLI::IsMember({"classical", "quantum", "compare"}));
  run->add_option("--threshold", threshold,
                  "max allowed total variation in compare mode");
  run->add_option("--out", out_path, "write the result document here");

  CLI::App* sample = app.add_subcommand(
      "sample", "Monte-Carlo measurement trajectories vs the exact joint");
  sample->add_option("--config", config_path, "model config JSON")->required();
  sample->add_option("--input", input, "input text")->required();
  sample->add_option("--trajectories", trajectories, "trajectory count")
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "base seed");
  sample->add_option("--out", out_path, "write the result document here");

  CLI::App* example = app.add_subcommand(
      "example", "Run the built-in two-token example and check its table");
  example->add_option("--out", out_path, "write the result document here");

  CLI::App* choi = app.add_subcommand(
      "choi", "Kraus/Choi verification of each block's channel");
  choi->add_option("--config", config_path, "model config JSON")->required();
  choi->add_option("--max-block", max_block, "largest input block to verify");
  choi->add_option("--out", out_path, "write the result document here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, input, mode, threshold, out_path);
    if (sample->parsed())
      return cmd_sample(config_path, input, trajectories, seed, out_path);
    if (example->parsed()) return cmd_example(out_path);
    if (choi->parsed()) return cmd_choi(config_path, max_block, out_path);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
