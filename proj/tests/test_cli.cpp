#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

int run_sim(const std::string& args) {
  const std::string command =
      std::string(SIM_BINARY_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string kConfig = EXAMPLE_CONFIG_PATH;

}  // namespace

TEST_CASE("sim example exits 0") {
  CHECK(run_sim("example") == 0);
}

TEST_CASE("sim run compare on the example config exits 0") {
  CHECK(run_sim("run --config " + kConfig +
                " --input \"x0 x1 x0\" --mode compare") == 0);
  CHECK(run_sim("run --config " + kConfig +
                " --input \"x0 x1 x0\" --mode classical") == 0);
  CHECK(run_sim("run --config " + kConfig +
                " --input \"x0 x1 x0\" --mode quantum") == 0);
}

TEST_CASE("validation failures exit 1 with distinct causes") {
  // Unknown token in the input text.
  CHECK(run_sim("run --config " + kConfig + " --input \"x0 zz\"") == 1);
  // Missing config file.
  CHECK(run_sim("run --config /nonexistent.json --input \"x0\"") == 1);
  // Malformed JSON.
  {
    std::ofstream bad("cli_bad_config.json", std::ios::binary);
    bad << "{broken";
  }
  CHECK(run_sim("run --config cli_bad_config.json --input \"x0\"") == 1);
  // Config that fails validation (value closure).
  {
    std::ofstream bad("cli_closure_config.json", std::ios::binary);
    bad << R"({"embedding_dim": 2,
               "tokens": [{"symbol": "x0", "embedding": [1.0, 0.0]},
                          {"symbol": "x1", "embedding": [0.0, 1.0]}],
               "scaling": "none",
               "blocks": [{"W_Q": [[1.0, 0.0], [0.0, 1.0]],
                           "W_K": [[1.0, 0.0], [0.0, 1.0]],
                           "W_V": [[0.5, 0.5], [0.5, 0.5]],
                           "ffn": {"x0": "x0", "x1": "x1"}}]})";
  }
  CHECK(run_sim("run --config cli_closure_config.json --input \"x0\"") == 1);
  // Bad CLI usage.
  CHECK(run_sim("run --config " + kConfig) == 1);
  CHECK(run_sim("frobnicate") == 1);
}

TEST_CASE("compare failures above the threshold exit 2") {
  // The two paths agree exactly, so any nonnegative threshold passes and a
  // negative threshold must fail.
  CHECK(run_sim("run --config " + kConfig +
                " --input \"x0 x1 x0\" --mode compare --threshold -1") == 2);
}

TEST_CASE("sim choi on the example config exits 0") {
  CHECK(run_sim("choi --config " + kConfig + " --max-block 3") == 0);
}

TEST_CASE("sim sample result documents are byte-identical across reruns") {
  const std::string args = "sample --config " + kConfig +
                           " --input \"x0 x1 x0\" --trajectories 2000 "
                           "--seed 5 --out ";
  CHECK(run_sim(args + "cli_sample_a.json") == 0);
  CHECK(run_sim(args + "cli_sample_b.json") == 0);
  const std::string a = slurp("cli_sample_a.json");
  CHECK(a == slurp("cli_sample_b.json"));
  CHECK(a.find("\"chi_square\"") != std::string::npos);
  CHECK(a.find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("sim run result documents are byte-identical across reruns") {
  const std::string args = "run --config " + kConfig +
                           " --input \"x0 x1 x0\" --mode compare --out ";
  CHECK(run_sim(args + "cli_run_a.json") == 0);
  CHECK(run_sim(args + "cli_run_b.json") == 0);
  const std::string a = slurp("cli_run_a.json");
  CHECK(a == slurp("cli_run_b.json"));
  CHECK(a.find("\"total_variation\": 0") != std::string::npos);
  CHECK(a.find("\"truncation\": 5") != std::string::npos);
}
