// Command-line front end for the noisy-Clifford memory laboratory.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure,
// 3 resource cap exceeded. Malformed input files count as usage errors;
// files that parse but fail their semantic checks count as verification
// failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cliffmem/adjoint.hpp"
#include "cliffmem/checks.hpp"
#include "cliffmem/circuit.hpp"
#include "cliffmem/dense.hpp"
#include "cliffmem/plot.hpp"
#include "cliffmem/stats.hpp"
#include "cliffmem/sweep.hpp"

namespace {

using namespace cliffmem;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kVerificationFailure = 2;
constexpr int kCapExceeded = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
}

// Shortest decimal form that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// A density matrix from a state JSON file. Accepted forms:
//   {"basis": "0110"}                      computational basis state
//   {"product_bloch": [[x,y,z], ...]}      product of single-qubit states
//   {"matrix": {"re": [[..]], "im": [[..]]}}  explicit density matrix
DensityMatrix parse_state(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("state JSON malformed: ") + e.what());
  }
  if (j.contains("basis")) {
    return DensityMatrix::basis_state(j.at("basis").get<std::string>());
  }
  if (j.contains("product_bloch")) {
    std::vector<std::array<double, 3>> bloch;
    for (const json& v : j.at("product_bloch")) {
      if (!v.is_array() || v.size() != 3) {
        throw std::runtime_error("product_bloch entries must be 3-vectors");
      }
      bloch.push_back({v[0].get<double>(), v[1].get<double>(),
                       v[2].get<double>()});
    }
    return DensityMatrix::product_bloch(bloch);
  }
  if (j.contains("matrix")) {
    const json& m = j.at("matrix");
    const json& re = m.at("re");
    const json& im = m.at("im");
    const std::size_t rows = re.size();
    if (im.size() != rows) {
      throw std::runtime_error("matrix re/im shape mismatch");
    }
    ComplexMatrix mat(rows, rows);
    for (std::size_t r = 0; r < rows; ++r) {
      if (re[r].size() != rows || im[r].size() != rows) {
        throw std::runtime_error("matrix must be square");
      }
      for (std::size_t c = 0; c < rows; ++c) {
        mat(Eigen::Index(r), Eigen::Index(c)) = {re[r][c].get<double>(),
                                                 im[r][c].get<double>()};
      }
    }
    return DensityMatrix::from_matrix(std::move(mat));
  }
  throw std::runtime_error(
      "state JSON needs one of: basis, product_bloch, matrix");
}

Circuit load_circuit(const std::string& path) {
  return parse_circuit(read_file(path));
}

int run_validate(const std::string& path) {
  const Circuit c = load_circuit(path);
  const std::vector<std::string> violations = validate(c);
  if (violations.empty()) {
    std::cout << "ok: " << c.num_qubits << " qubits, " << c.depth()
              << " layers, gamma " << fmt(c.noise.gamma) << "\n";
    return kOk;
  }
  for (const std::string& v : violations) {
    std::cout << "violation: " << v << "\n";
  }
  return kVerificationFailure;
}

int run_survival(const std::string& path, std::uint64_t trials,
                 std::uint64_t seed, double confidence, unsigned threads) {
  const Circuit c = load_circuit(path);
  {
    const std::vector<std::string> violations = validate(c);
    if (!violations.empty()) {
      std::cerr << "invalid circuit: " << violations.front() << "\n";
      return kVerificationFailure;
    }
  }
  const SurvivalEstimate est =
      survival_probability(c, trials, seed, confidence, threads);
  std::cout << "trials " << est.trials << "\n";
  std::cout << "survivors " << est.survivors << "\n";
  std::cout << "p_hat " << fmt(est.p_hat) << "\n";
  std::cout << "ci " << fmt(est.ci_lo) << " " << fmt(est.ci_hi)
            << " (confidence " << fmt(est.confidence) << ")\n";
  return kOk;
}

int run_exact(const std::string& circuit_path, const std::string& rho_path,
              const std::string& sigma_path) {
  const Circuit c = load_circuit(circuit_path);
  const DensityMatrix rho = parse_state(read_file(rho_path));
  const DensityMatrix sigma = parse_state(read_file(sigma_path));
  if (rho.num_qubits() != c.num_qubits || sigma.num_qubits() != c.num_qubits) {
    std::cerr << "state qubit count does not match circuit (" << c.num_qubits
              << ")\n";
    return kUsageError;
  }
  const double before = trace_distance(rho, sigma);
  const double after = trace_distance(evolve(c, rho), evolve(c, sigma));
  std::cout << "trace_distance_before " << fmt(before) << "\n";
  std::cout << "trace_distance_after " << fmt(after) << "\n";
  return kOk;
}

int report_suite(const std::string& name, const SuiteReport& report) {
  for (const std::string& f : report.failures) {
    std::cout << "FAIL " << name << ": " << f << "\n";
  }
  std::cout << name << ": " << report.instances << " instances, "
            << report.failures.size() << " failures -> "
            << (report.passed() ? "PASS" : "FAIL") << "\n";
  return report.passed() ? kOk : kVerificationFailure;
}

int run_check(const std::string& suite, std::uint64_t instances,
              std::uint64_t seed) {
  if (suite == "lemma1") {
    const std::uint64_t k = instances ? instances : 100;
    return report_suite(suite, check_memory_bound(k, seed));
  }
  if (suite == "fact") {
    // For this suite --instances counts Monte Carlo samples per grid cell.
    const std::uint64_t k = instances ? instances : 20000;
    return report_suite(suite, check_weight_decay(k, seed));
  }
  if (suite == "adjoint") {
    return report_suite(suite, check_adjoint_consistency(seed));
  }
  std::cerr << "unknown check suite: " << suite << "\n";
  return kUsageError;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path,
                  unsigned threads) {
  const SweepConfig cfg = parse_sweep_config(read_file(config_path));
  {
    const std::vector<std::string> violations = validate(cfg);
    if (!violations.empty()) {
      for (const std::string& v : violations) {
        std::cout << "violation: " << v << "\n";
      }
      return kVerificationFailure;
    }
  }
  std::vector<SweepRow> existing;
  if (std::filesystem::exists(out_path)) {
    existing = parse_sweep_csv(read_file(out_path));
    std::cout << "resuming: " << existing.size() << " rows already in "
              << out_path << "\n";
  }
  const std::vector<SweepRow> merged = run_sweep(cfg, existing, threads);
  write_file(out_path, write_sweep_csv(merged));
  std::cout << "wrote " << merged.size() << " rows ("
            << merged.size() - existing.size() << " new) to " << out_path
            << "\n";
  return kOk;
}

int run_fit(const std::string& csv_path, double epsilon) {
  const std::vector<SweepRow> rows = parse_sweep_csv(read_file(csv_path));
  if (rows.empty()) {
    std::cerr << "no rows in " << csv_path << "\n";
    return kUsageError;
  }

  std::map<std::tuple<std::string, std::size_t, double>,
           std::vector<DepthSample>>
      series;
  for (const SweepRow& row : rows) {
    series[{row.family, row.n, row.gamma}].push_back(
        {double(row.depth), row.p_hat, row.survivors});
  }

  std::map<std::tuple<std::string, double>, std::vector<ScalingPoint>> scaling;
  std::size_t fitted = 0;
  for (auto& [key, samples] : series) {
    const auto& [family, n, gamma] = key;
    std::sort(samples.begin(), samples.end(),
              [](const DepthSample& a, const DepthSample& b) {
                return a.depth < b.depth;
              });
    std::cout << family << " n=" << n << " gamma=" << fmt(gamma) << ": ";
    DecayFit fit;
    try {
      fit = fit_decay(samples, epsilon);
    } catch (const std::invalid_argument& e) {
      std::cout << "unfittable (" << e.what() << ")\n";
      continue;
    }
    ++fitted;
    if (fit.saturated) {
      std::cout << "saturated, first zero-survivor depth "
                << fmt(fit.d_star_hat) << "\n";
    } else if (fit.infinite) {
      std::cout << "no decay (slope " << fmt(fit.slope) << "), d* infinite\n";
    } else {
      std::cout << "slope " << fmt(fit.slope) << ", r2 "
                << fmt(fit.r_squared) << ", d* " << fmt(fit.d_star_hat)
                << " at epsilon " << fmt(epsilon) << " (" << fit.rows_used
                << " rows)\n";
    }
    if (std::isfinite(fit.d_star_hat) && fit.d_star_hat > 0.0) {
      scaling[{family, gamma}].push_back({double(n), fit.d_star_hat});
    }
  }
  if (fitted == 0) {
    std::cerr << "no series could be fitted\n";
    return kVerificationFailure;
  }

  for (auto& [key, points] : scaling) {
    if (points.size() < 3) {
      continue;
    }
    const ScalingReport report = estimate_dstar_scaling(points);
    std::cout << std::get<0>(key) << " gamma=" << fmt(std::get<1>(key))
              << " d* ratios:";
    for (std::size_t i = 0; i < report.ratios.size(); ++i) {
      std::cout << " " << fmt(report.ratios[i]) << " (bound "
                << fmt(report.bounds[i]) << ")";
    }
    std::cout << " -> "
              << (report.polylog_consistent ? "polylog-consistent"
                                            : "inconsistent")
              << "\n";
  }
  return kOk;
}

int run_plot(const std::string& csv_path, const std::string& kind_name,
             const std::string& out_path, double epsilon) {
  const auto kind = plot_kind_from_name(kind_name);
  if (!kind) {
    std::cerr << "unknown plot kind: " << kind_name << "\n";
    return kUsageError;
  }
  const std::vector<SweepRow> rows = parse_sweep_csv(read_file(csv_path));
  write_file(out_path, render_plot(rows, *kind, epsilon));
  std::cout << "wrote " << plot_kind_name(*kind) << " plot for " << rows.size()
            << " rows to " << out_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Noisy-Clifford memory laboratory: survival estimation, verification "
      "suites, sweeps, decay fits and plots"};
  app.require_subcommand(1);

  std::string circuit_path, rho_path, sigma_path;
  std::string config_path, csv_path, out_path, suite, kind_name;
  std::uint64_t trials = 10000, seed = 1, instances = 0;
  double confidence = 0.99, epsilon = 0.01;
  unsigned threads = 1;

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a circuit file and report every "
                                     "violation");
  validate_cmd->add_option("circuit", circuit_path, "circuit JSON file")
      ->required();

  CLI::App* survival_cmd = app.add_subcommand(
      "survival", "Monte Carlo estimate of the Pauli survival probability");
  survival_cmd->add_option("circuit", circuit_path, "circuit JSON file")
      ->required();
  survival_cmd->add_option("--trials", trials, "Monte Carlo trials")
      ->capture_default_str();
  survival_cmd->add_option("--seed", seed, "master seed")
      ->capture_default_str();
  survival_cmd->add_option("--confidence", confidence,
                           "two-sided interval confidence")
      ->capture_default_str();
  survival_cmd->add_option("--threads", threads, "worker threads")
      ->capture_default_str();

  CLI::App* exact_cmd = app.add_subcommand(
      "exact", "Trace distance between two states pushed through the "
               "noise-averaged circuit (dense, small systems only)");
  exact_cmd->add_option("circuit", circuit_path, "circuit JSON file")
      ->required();
  exact_cmd->add_option("--rho", rho_path, "first state JSON file")
      ->required();
  exact_cmd->add_option("--sigma", sigma_path, "second state JSON file")
      ->required();

  CLI::App* check_cmd =
      app.add_subcommand("check", "Run a verification suite; nonzero exit on "
                                  "any failure");
  check_cmd->add_option("suite", suite, "lemma1 | fact | adjoint")
      ->required()
      ->check(CLI::IsMember({"lemma1", "fact", "adjoint"}));
  check_cmd->add_option(
      "--instances", instances,
      "random instances (lemma1) or samples per cell (fact); 0 = suite "
      "default, ignored by adjoint");
  check_cmd->add_option("--seed", seed, "suite seed")->capture_default_str();

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run a survival sweep over a family grid, resuming from any "
               "rows already in the output CSV");
  sweep_cmd->add_option("config", config_path, "sweep config JSON file")
      ->required();
  sweep_cmd->add_option("--out", out_path, "output CSV path")->required();
  sweep_cmd->add_option("--threads", threads, "worker threads")
      ->capture_default_str();

  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Fit exponential decays per series and report d* scaling");
  fit_cmd->add_option("results", csv_path, "sweep results CSV")->required();
  fit_cmd->add_option("--epsilon", epsilon, "survival threshold for d*")
      ->capture_default_str();

  CLI::App* plot_cmd =
      app.add_subcommand("plot", "Render a sweep results CSV to SVG");
  plot_cmd->add_option("results", csv_path, "sweep results CSV")->required();
  plot_cmd->add_option("--kind", kind_name,
                       "survival-vs-depth | dstar-vs-n")
      ->required();
  plot_cmd->add_option("--out", out_path, "output SVG path")->required();
  plot_cmd->add_option("--epsilon", epsilon,
                       "survival threshold for the scaling plot")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (validate_cmd->parsed()) {
      return run_validate(circuit_path);
    }
    if (survival_cmd->parsed()) {
      return run_survival(circuit_path, trials, seed, confidence, threads);
    }
    if (exact_cmd->parsed()) {
      return run_exact(circuit_path, rho_path, sigma_path);
    }
    if (check_cmd->parsed()) {
      return run_check(suite, instances, seed);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep_cmd(config_path, out_path, threads);
    }
    if (fit_cmd->parsed()) {
      return run_fit(csv_path, epsilon);
    }
    if (plot_cmd->parsed()) {
      return run_plot(csv_path, kind_name, out_path, epsilon);
    }
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
