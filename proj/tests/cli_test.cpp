#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gme/cli.hpp"
#include "gme/states.hpp"

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("gme");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const std::string& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = gme::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("eval reports exact values for the reference states") {
  CliResult r = run_cli({"eval", "--state", "ghz", "--n", "3", "--criterion", "q0"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "criterion: q0\n"));
  CHECK(contains(r.out, "basis: comp\n"));
  CHECK(contains(r.out, "value: 0.5\n"));
  CHECK(contains(r.out, "detected: true\n"));

  r = run_cli({"eval", "--state", "w", "--n", "3", "--criterion", "q1"});
  CHECK(contains(r.out, "value: 1\n"));
  CHECK(contains(r.out, "detected: true\n"));

  r = run_cli({"eval", "--state", "ghz", "--n", "3", "--criterion", "q0", "--q", "1"});
  CHECK(contains(r.out, "value: -0.375\n"));
  CHECK(contains(r.out, "detected: false\n"));

  r = run_cli({"eval", "--state", "dicke", "--n", "4", "--m", "2", "--criterion", "q2"});
  CHECK(contains(r.out, "value: 2\n"));

  r = run_cli({"eval", "--state", "ghz", "--n", "3", "--criterion", "q0", "--basis",
               "hadamard"});
  CHECK(contains(r.out, "basis: hadamard\n"));
  CHECK(contains(r.out, "value: 0\n"));
  CHECK(contains(r.out, "detected: false\n"));
}

TEST_CASE("eval can list the elements a criterion reads") {
  const CliResult r = run_cli(
      {"eval", "--state", "ghz", "--n", "2", "--criterion", "q1", "--elements"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "value: -1\n"));
  CHECK(contains(r.out, "elements: (0,0) (1,2) (2,1) (3,3)\n"));
}

TEST_CASE("eval reads density matrices from files") {
  const auto path = temp_path("gme_cli_eval_rho.json");
  {
    const gme::DensityMatrix rho = gme::DensityMatrix::pure(gme::make_ghz(gme::QubitCount{3}));
    std::ofstream out(path);
    gme::save_density_matrix(rho, out);
  }
  const CliResult r = run_cli(
      {"eval", "--file", path.string(), "--criterion", "q0", "--q", "0.4"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "value: 0.15\n"));
  CHECK(contains(r.out, "detected: true\n"));
  std::filesystem::remove(path);
}

TEST_CASE("eval distinguishes parse failures from physics failures") {
  const CliResult missing = run_cli(
      {"eval", "--file", "/nonexistent/rho.json", "--criterion", "q0"});
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "parse error"));

  const auto bad_path = temp_path("gme_cli_bad_rho.json");
  {
    std::ofstream out(bad_path);
    out << R"({"n": 2, "entries": [)";
    for (int k = 0; k < 16; ++k) out << (k % 5 == 0 ? "[0.3, 0.0]" : "[0.0, 0.0]") << (k + 1 < 16 ? "," : "");
    out << "]}";
  }
  const CliResult unphysical = run_cli(
      {"eval", "--file", bad_path.string(), "--criterion", "q0"});
  CHECK(unphysical.code == 2);
  CHECK(contains(unphysical.err, "validation error"));
  std::filesystem::remove(bad_path);

  const CliResult no_state = run_cli({"eval", "--criterion", "q0"});
  CHECK(no_state.code == 1);

  const CliResult bad_criterion =
      run_cli({"eval", "--state", "ghz", "--n", "3", "--criterion", "p7"});
  CHECK(bad_criterion.code == 1);

  const CliResult bad_noise =
      run_cli({"eval", "--state", "ghz", "--n", "3", "--criterion", "q0", "--q", "1.5"});
  CHECK(bad_noise.code == 1);
}

TEST_CASE("usage errors exit with code one and help with zero") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"eval", "--state", "ghz", "--n", "3"}).code == 1);  // missing --criterion
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(contains(run_cli({"--help"}).out, "eval"));
}

TEST_CASE("prob prints a text report with the run parameters") {
  const CliResult r = run_cli({"prob", "--state", "ghz", "--n", "3", "--q", "0.2",
                               "--criteria", "q0,q1", "--bases", "comp,hadamard",
                               "--samples", "500", "--seed", "5"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "command: prob\n"));
  CHECK(contains(r.out, "state: ghz n=3\n"));
  CHECK(contains(r.out, "group: product\n"));
  CHECK(contains(r.out, "detector: q0@comp,q0@hadamard,q1@comp,q1@hadamard\n"));
  CHECK(contains(r.out, "samples: 500\n"));
  CHECK(contains(r.out, "seed: 5\n"));
  CHECK(contains(r.out, "threshold: 1e-10\n"));
  CHECK(contains(r.out, "q: 0.2\n"));
  CHECK(contains(r.out, "n_hits: "));
  CHECK(contains(r.out, "p_hat: "));
}

TEST_CASE("prob honors the samples environment variable") {
  ::setenv("GME_SAMPLES", "1500", 1);
  const CliResult r = run_cli({"prob", "--state", "ghz", "--n", "3", "--q", "0.9",
                               "--criteria", "q0", "--seed", "1"});
  ::unsetenv("GME_SAMPLES");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "samples: 1500\n"));

  ::setenv("GME_SAMPLES", "700", 1);
  const CliResult overridden =
      run_cli({"prob", "--state", "ghz", "--n", "3", "--q", "0.9", "--criteria", "q0",
               "--samples", "300"});
  ::unsetenv("GME_SAMPLES");
  CHECK(contains(overridden.out, "samples: 300\n"));
}

TEST_CASE("sweep emits csv with the exact header") {
  const CliResult r = run_cli({"sweep", "--state", "ghz", "--n", "3", "--q-grid",
                               "0,0.25,0.5", "--criteria", "q0", "--samples", "400",
                               "--seed", "3"});
  CHECK(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "q,p_hat,ci_low,ci_high,n_samples,n_hits,seed");
  CHECK(fields_of(lines[1])[0] == "0");
  CHECK(fields_of(lines[2])[0] == "0.25");
  CHECK(fields_of(lines[3])[0] == "0.5");

  // More isotropic noise can only shrink every criterion value, so with
  // shared unitaries the hit counts cannot increase along the grid.
  long long previous = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = fields_of(lines[i]);
    REQUIRE(fields.size() == 7);
    const long long hits = std::stoll(fields[5]);
    CHECK(fields[4] == "400");
    CHECK(fields[6] == "3");
    if (previous >= 0) CHECK(hits <= previous);
    previous = hits;
  }
}

TEST_CASE("records round-trip estimation runs exactly") {
  const auto record = temp_path("gme_cli_prob_record.json");
  const CliResult first = run_cli({"prob", "--state", "w", "--n", "3", "--q", "0.1",
                                   "--criteria", "q0,q1", "--samples", "400", "--seed", "9",
                                   "--record", record.string()});
  REQUIRE(first.code == 0);
  const CliResult replay = run_cli({"prob", "--from-record", record.string()});
  CHECK(replay.code == 0);
  CHECK(replay.out == first.out);

  const CliResult mismatch = run_cli({"sweep", "--from-record", record.string()});
  CHECK(mismatch.code == 1);
  CHECK(contains(mismatch.err, "parse error"));
  std::filesystem::remove(record);
}

TEST_CASE("sweep records replay to identical csv") {
  const auto record = temp_path("gme_cli_sweep_record.json");
  const CliResult first = run_cli({"sweep", "--state", "ghz", "--n", "3", "--q-grid",
                                   "0.1,0.4", "--criteria", "q0", "--samples", "300",
                                   "--seed", "2", "--record", record.string()});
  REQUIRE(first.code == 0);
  const CliResult replay = run_cli({"sweep", "--from-record", record.string()});
  CHECK(replay.code == 0);
  CHECK(replay.out == first.out);
  std::filesystem::remove(record);
}

TEST_CASE("reference prints the analytic targets") {
  const CliResult r = run_cli({"reference"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "0.529660375"));   // ghz3 q0
  CHECK(contains(r.out, "0.2604068"));     // w3 q1
  CHECK(contains(r.out, "0.0731692"));     // w5 q1
  CHECK(contains(r.out, "0.577350269"));   // w3 q0
  CHECK(contains(r.out, "0.428372991"));   // d42 q0
  CHECK(contains(r.out, "0.7162076"));     // d42 combined
}

TEST_CASE("estimation validates group and state names") {
  CHECK(run_cli({"prob", "--state", "ghz", "--n", "3", "--q", "0.1", "--criteria", "q0",
                 "--group", "unitary", "--samples", "100"})
            .code == 1);
  CHECK(run_cli({"prob", "--state", "cluster", "--n", "3", "--q", "0.1", "--criteria", "q0",
                 "--samples", "100"})
            .code == 1);
  CHECK(run_cli({"prob", "--state", "ghz", "--n", "3", "--q", "0.1", "--criteria", "q0",
                 "--bases", "fourier", "--samples", "100"})
            .code == 1);
  CHECK(run_cli({"sweep", "--state", "ghz", "--n", "3", "--q-grid", "0.5,0.1",
                 "--criteria", "q0", "--samples", "100"})
            .code == 1);
}
