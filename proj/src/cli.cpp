#include "gme/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <locale>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gme/criteria.hpp"
#include "gme/errors.hpp"
#include "gme/estimator.hpp"
#include "gme/haar.hpp"
#include "gme/states.hpp"
#include "gme/version.hpp"

namespace gme::cli {

namespace {

constexpr std::uint64_t kDefaultSamples = 200000;
constexpr const char* kSamplesEnvVar = "GME_SAMPLES";
constexpr const char* kCsvHeader = "q,p_hat,ci_low,ci_high,n_samples,n_hits,seed";

std::string fmt(double x) {
  std::ostringstream stream;
  stream.imbue(std::locale::classic());
  stream << std::setprecision(9) << x;
  return stream.str();
}

// ---------------------------------------------------------------------------
// Analytic reference values.  The complete elliptic integrals appear in the
// parameter convention, K(m) and Pi(n, m), with negative arguments; their
// integrands over [0, pi/2] are then smooth, so a composite Simpson rule
// reaches machine precision directly.

template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + h * i) * (i % 2 != 0 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

double elliptic_k(double m) {
  return simpson(
      [m](double t) {
        const double s2 = std::sin(t) * std::sin(t);
        return 1.0 / std::sqrt(1.0 - m * s2);
      },
      0.0, std::numbers::pi / 2.0, 4096);
}

double elliptic_pi(double n, double m) {
  return simpson(
      [n, m](double t) {
        const double s2 = std::sin(t) * std::sin(t);
        return 1.0 / ((1.0 - n * s2) * std::sqrt(1.0 - m * s2));
      },
      0.0, std::numbers::pi / 2.0, 4096);
}

double w_state_q1_probability(int n) {
  return (1.0 + std::sqrt((n - 1.0) / (n - 2.0)) - 2.0 * std::sqrt((n - 1.0) / n)) / n;
}

int cmd_reference(std::ostream& out) {
  const double k = elliptic_k(-0.125);
  const double pi_full = elliptic_pi(-0.5, -0.125);
  const double ghz3_q0 =
      1.0 + 3.0 * std::numbers::sqrt2 * (2.0 * k - 3.0 * pi_full) / (2.0 * std::numbers::pi);

  out << "# Analytic single-basis detection probabilities under symmetric sampling.\n"
      << "# The acceptance suite asserts Monte Carlo estimates against these targets.\n";
  const auto line = [&out](const std::string& label, const std::string& closed_form,
                           double value) {
    out << std::left << std::setw(14) << label << std::setw(64) << closed_form << fmt(value)
        << "\n";
  };
  line("ghz3 q0", "1 + 3*sqrt(2)*(2*K(-1/8) - 3*Pi(-1/2,-1/8))/(2*pi)", ghz3_q0);
  for (int n = 3; n <= 6; ++n) {
    line("w" + std::to_string(n) + " q1", "(1 + sqrt((n-1)/(n-2)) - 2*sqrt((n-1)/n))/n",
         w_state_q1_probability(n));
  }
  line("w3 q0", "1/sqrt(3)", 1.0 / std::sqrt(3.0));
  line("wn q0, n>3", "0", 0.0);
  line("d42 q0", "1/sqrt(3 + sqrt(6))", 1.0 / std::sqrt(3.0 + std::sqrt(6.0)));
  line("d42 q1", "(sqrt(2) - 1)/2", (std::numbers::sqrt2 - 1.0) / 2.0);
  line("d42 q2", "1 - sqrt(8 - 2*sqrt(3))/3", 1.0 - std::sqrt(8.0 - 2.0 * std::sqrt(3.0)) / 3.0);
  line("d42 q0+q1+q2",
       "(3 + 3*sqrt(2) + 2*sqrt(3*(3-sqrt(6))) - 2*sqrt(4+sqrt(13)))/6",
       (3.0 + 3.0 * std::numbers::sqrt2 + 2.0 * std::sqrt(3.0 * (3.0 - std::sqrt(6.0))) -
        2.0 * std::sqrt(4.0 + std::sqrt(13.0))) /
           6.0);
  return 0;
}

// ---------------------------------------------------------------------------
// Shared argument plumbing.

BasisRotation parse_basis(const std::string& text) {
  if (text == "comp") return BasisRotation::computational();
  if (text == "hadamard") return BasisRotation::hadamard();
  throw std::invalid_argument("unknown basis \"" + text + "\" (expected comp or hadamard)");
}

StateVector build_state(const std::string& kind, int n, int dicke_m) {
  const QubitCount qubits{n};
  if (kind == "ghz") return make_ghz(qubits);
  if (kind == "w") return make_w(qubits);
  if (kind == "dicke") return make_dicke(qubits, dicke_m);
  throw std::invalid_argument("unknown state \"" + kind + "\" (expected ghz, w or dicke)");
}

DetectorConfig build_detector(const std::vector<std::string>& criteria,
                              const std::vector<std::string>& bases) {
  if (criteria.empty()) throw std::invalid_argument("at least one criterion is required");
  if (bases.empty()) throw std::invalid_argument("at least one basis is required");
  std::vector<DetectorConfig::Pair> pairs;
  for (const std::string& criterion : criteria) {
    for (const std::string& basis : bases) {
      pairs.emplace_back(CriterionId::parse(criterion), parse_basis(basis));
    }
  }
  return DetectorConfig{std::move(pairs)};
}

// Configuration of one estimation run, shared by prob and sweep and stored
// in run records.
struct RunConfig {
  std::string command;  // "prob" or "sweep"
  std::string state_kind;
  int n = 0;
  int dicke_m = 0;
  double q = 0.0;                // prob only
  std::vector<double> q_grid;    // sweep only
  std::string group = "product";
  std::vector<std::string> criteria;
  std::vector<std::string> bases{"comp"};
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = 1;
};

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j;
  j["state"] = config.state_kind;
  j["n"] = config.n;
  if (config.state_kind == "dicke") j["m"] = config.dicke_m;
  if (config.command == "sweep") {
    j["q_grid"] = config.q_grid;
  } else {
    j["q"] = config.q;
  }
  j["group"] = config.group;
  j["criteria"] = config.criteria;
  j["bases"] = config.bases;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["threshold"] = detection_threshold;
  return j;
}

void write_record(const std::string& path, const RunConfig& config,
                  const std::vector<SweepPoint>& points) {
  nlohmann::json doc;
  doc["tool"] = "gme";
  doc["version"] = version_string;
  doc["command"] = config.command;
  doc["config"] = config_to_json(config);
  nlohmann::json results = nlohmann::json::array();
  for (const SweepPoint& point : points) {
    results.push_back({{"q", point.q},
                       {"p_hat", point.estimate.p_hat},
                       {"ci_low", point.estimate.ci_low},
                       {"ci_high", point.estimate.ci_high},
                       {"n_samples", point.estimate.n_samples},
                       {"n_hits", point.estimate.n_hits}});
  }
  doc["results"] = std::move(results);
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write record: " + path);
  out << doc.dump(1) << '\n';
}

RunConfig read_record(const std::string& path, const std::string& expected_command) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open record: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid record JSON: ") + e.what());
  }
  try {
    if (doc.at("command").get<std::string>() != expected_command)
      throw ParseError("record was written by \"" + doc.at("command").get<std::string>() +
                       "\", not \"" + expected_command + "\"");
    const nlohmann::json& j = doc.at("config");
    RunConfig config;
    config.command = expected_command;
    config.state_kind = j.at("state").get<std::string>();
    config.n = j.at("n").get<int>();
    if (j.contains("m")) config.dicke_m = j.at("m").get<int>();
    if (expected_command == "sweep") {
      config.q_grid = j.at("q_grid").get<std::vector<double>>();
    } else {
      config.q = j.at("q").get<double>();
    }
    config.group = j.at("group").get<std::string>();
    config.criteria = j.at("criteria").get<std::vector<std::string>>();
    config.bases = j.at("bases").get<std::vector<std::string>>();
    config.samples = j.at("samples").get<std::uint64_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    return config;
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what());
  }
}

void print_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << kCsvHeader << "\n";
  for (const SweepPoint& point : points) {
    const ProbabilityEstimate& e = point.estimate;
    out << fmt(point.q) << ',' << fmt(e.p_hat) << ',' << fmt(e.ci_low) << ',' << fmt(e.ci_high)
        << ',' << e.n_samples << ',' << e.n_hits << ',' << e.seed << "\n";
  }
}

void print_text_header(std::ostream& out, const RunConfig& config,
                       const DetectorConfig& detector) {
  out << "command: " << config.command << "\n";
  out << "state: " << config.state_kind << " n=" << config.n;
  if (config.state_kind == "dicke") out << " m=" << config.dicke_m;
  out << "\n";
  out << "group: " << config.group << "\n";
  out << "detector: " << detector.name() << "\n";
  out << "samples: " << config.samples << "\n";
  out << "seed: " << config.seed << "\n";
  out << "threshold: " << fmt(detection_threshold) << "\n";
}

void print_text_point(std::ostream& out, const SweepPoint& point) {
  out << "q: " << fmt(point.q) << "\n";
  out << "n_hits: " << point.estimate.n_hits << "\n";
  out << "p_hat: " << fmt(point.estimate.p_hat) << "\n";
  out << "ci_low: " << fmt(point.estimate.ci_low) << "\n";
  out << "ci_high: " << fmt(point.estimate.ci_high) << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands.

struct EvalArgs {
  std::string state_kind;
  int n = 0;
  int dicke_m = 0;
  std::string file;
  double q = 0.0;
  std::string criterion;
  std::string basis = "comp";
  bool elements = false;
};

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  std::optional<DensityMatrix> rho;
  if (!args.file.empty()) {
    rho = load_density_matrix(args.file);
    if (args.q != 0.0) rho = add_isotropic_noise(*rho, args.q);
  } else {
    if (args.state_kind.empty())
      throw std::invalid_argument("either --state or --file is required");
    rho = realize(NoiseFamily{build_state(args.state_kind, args.n, args.dicke_m), args.q});
  }
  const CriterionId id = CriterionId::parse(args.criterion);
  const BasisRotation basis = parse_basis(args.basis);
  if (basis.kind() != BasisRotation::Kind::Computational)
    rho = apply_local_unitary(*rho, basis.unitary(rho->qubit_count()));
  const CriterionEvaluator evaluator{id, rho->qubit_count()};
  const CriterionResult result = evaluator.evaluate(*rho);
  out << "criterion: " << id.name() << "\n";
  out << "basis: " << basis.name() << "\n";
  out << "value: " << fmt(result.value) << "\n";
  out << "detected: " << (result.detected ? "true" : "false") << "\n";
  if (args.elements) {
    out << "elements:";
    for (const auto& [row, col] : evaluator.required_elements())
      out << " (" << row << "," << col << ")";
    out << "\n";
  }
  return 0;
}

struct EstimateArgs {
  RunConfig config;
  unsigned threads = 0;
  std::string format = "text";
  std::string record_path;
  std::string from_record_path;
};

int run_estimation(EstimateArgs& args, std::ostream& out) {
  RunConfig& config = args.config;
  if (!args.from_record_path.empty())
    config = read_record(args.from_record_path, config.command);
  const StateVector base = build_state(config.state_kind, config.n, config.dicke_m);
  const UnitaryGroup group = UnitaryGroup::parse(config.group);
  const DetectorConfig detector = build_detector(config.criteria, config.bases);
  const ExecPolicy policy{args.threads};

  std::vector<SweepPoint> points;
  if (config.command == "sweep") {
    SweepResult result =
        sweep_noise(base, config.q_grid, group, detector, config.samples, config.seed, policy);
    points = std::move(result.points);
  } else {
    const ProbabilityEstimate estimate = estimate_probability(
        NoiseFamily{base, config.q}, group, detector, config.samples, config.seed, policy);
    points.push_back({config.q, estimate});
  }

  if (args.format == "csv") {
    print_csv(out, points);
  } else if (args.format == "text") {
    print_text_header(out, config, detector);
    for (const SweepPoint& point : points) print_text_point(out, point);
  } else {
    throw std::invalid_argument("unknown format \"" + args.format +
                                "\" (expected text or csv)");
  }
  if (!args.record_path.empty()) write_record(args.record_path, config, points);
  return 0;
}

void add_state_options(CLI::App* cmd, std::string& state_kind, int& n, int& dicke_m) {
  cmd->add_option("--state", state_kind, "Built-in state family: ghz, w or dicke");
  cmd->add_option("--n", n, "Number of qubits");
  cmd->add_option("--m", dicke_m, "Dicke excitation number (dicke only)");
}

void add_estimate_options(CLI::App* cmd, EstimateArgs& args) {
  add_state_options(cmd, args.config.state_kind, args.config.n, args.config.dicke_m);
  cmd->add_option("--group", args.config.group, "Unitary group: product or symmetric");
  cmd->add_option("--criteria", args.config.criteria,
                  "Comma-separated criteria, e.g. q0,q1")
      ->delimiter(',');
  cmd->add_option("--bases", args.config.bases, "Comma-separated bases: comp,hadamard")
      ->delimiter(',');
  cmd->add_option("--samples", args.config.samples, "Monte Carlo samples per estimate")
      ->envname(kSamplesEnvVar);
  cmd->add_option("--seed", args.config.seed, "Random seed");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = all cores, 1 = sequential)");
  cmd->add_option("--format", args.format, "Output format: text or csv");
  cmd->add_option("--record", args.record_path, "Write a JSON run record to this path");
  cmd->add_option("--from-record", args.from_record_path,
                  "Re-run the configuration stored in a JSON run record");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Element-based multipartite-entanglement criteria and Haar-averaged "
               "detection probabilities"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate one criterion on one state");
  add_state_options(eval_cmd, eval_args.state_kind, eval_args.n, eval_args.dicke_m);
  eval_cmd->add_option("--file", eval_args.file, "Density-matrix JSON file instead of --state");
  eval_cmd->add_option("--q", eval_args.q, "Isotropic noise weight in [0, 1]");
  eval_cmd->add_option("--criterion", eval_args.criterion, "Criterion: q0, q1, ...")
      ->required();
  eval_cmd->add_option("--basis", eval_args.basis, "Basis: comp or hadamard");
  eval_cmd->add_flag("--elements", eval_args.elements,
                     "Also print the matrix elements the criterion reads");

  EstimateArgs prob_args;
  prob_args.config.command = "prob";
  CLI::App* prob_cmd =
      app.add_subcommand("prob", "Estimate the detection probability at one noise level");
  add_estimate_options(prob_cmd, prob_args);
  prob_cmd->add_option("--q", prob_args.config.q, "Isotropic noise weight in [0, 1]");

  EstimateArgs sweep_args;
  sweep_args.config.command = "sweep";
  sweep_args.format = "csv";
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Estimate detection probabilities over a noise grid");
  add_estimate_options(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--q-grid", sweep_args.config.q_grid,
                        "Comma-separated increasing noise weights")
      ->delimiter(',');

  CLI::App* reference_cmd =
      app.add_subcommand("reference", "Print the analytic reference probabilities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(eval_args, out);
    if (prob_cmd->parsed()) return run_estimation(prob_args, out);
    if (sweep_cmd->parsed()) return run_estimation(sweep_args, out);
    if (reference_cmd->parsed()) return cmd_reference(out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gme::cli
