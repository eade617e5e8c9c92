#include "esdsim/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esdsim/config.hpp"
#include "esdsim/csvio.hpp"
#include "esdsim/errors.hpp"
#include "esdsim/plot.hpp"
#include "esdsim/protocol.hpp"
#include "esdsim/rng.hpp"
#include "json.hpp"

namespace esd::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double min, double max, int points) {
  if (points < 1) throw ConfigError("grid needs at least one point");
  if (min < 0.0) throw ConfigError("grid min must be non-negative");
  if (points > 1 && !(max > min))
    throw ConfigError("grid max must exceed grid min");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = points == 1 ? min : min + (max - min) * i / (points - 1);
  if (points > 1) grid.back() = max;
  return grid;
}

void emit(const std::string& out, const std::string& text) {
  if (out == "-")
    std::cout << text;
  else
    io::write_text_file(out, text);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const io::CliOverrides& overrides) {
  const io::RunConfig cfg = io::load_run_config(config_path, overrides);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  const std::vector<protocol::ExperimentResult> results =
      protocol::parallel_sets_run(cfg.sets);

  std::vector<std::string> csv_names;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const std::string name = "set" + std::to_string(k) + ".csv";
    io::write_series_csv(out_dir + "/" + name, results[k]);
    csv_names.push_back(name);
  }
  io::write_manifest(out_dir + "/manifest.json", cfg, results, csv_names);

  for (std::size_t k = 0; k < results.size(); ++k) {
    const protocol::ExperimentResult& r = results[k];
    char line[160];
    std::snprintf(line, sizeof line,
                  "%s: alpha=%.6f, %zu grid points, %d warnings%s\n",
                  csv_names[k].c_str(), r.config.init.s(),
                  r.system.points.size(), r.quality_warnings,
                  r.mitigated ? ", mitigated" : "");
    std::cout << line;
  }
  std::cout << "wrote " << out_dir << "/manifest.json\n";
  return 0;
}

int cmd_analytic(const std::string& alpha_str, double lambda, bool has_alpha,
                 bool has_lambda, double min, double max, int points,
                 const std::string& out) {
  if (has_alpha == has_lambda)
    throw ConfigError("give exactly one of --alpha or --lambda");
  const ent::InitialState init =
      has_alpha ? ent::InitialState::from_alpha(io::parse_alpha(alpha_str))
                : ent::InitialState::from_lambda(lambda);
  emit(out, io::analytic_csv_text(init, linspace(min, max, points)));
  return 0;
}

int cmd_plot(const std::string& dir, int set_index, std::string out) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_text_file(dir + "/manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  if (!manifest.contains("sets") || !manifest["sets"].is_array() ||
      set_index < 0 ||
      static_cast<std::size_t>(set_index) >= manifest["sets"].size())
    throw ConfigError("set index is not in the manifest");
  const nlohmann::json& set = manifest["sets"][set_index];
  const std::string csv = set.at("csv").get<std::string>();
  const double lambda = set.at("lambda").get<double>();
  const ent::InitialState init = ent::InitialState::from_lambda(lambda);

  const std::vector<io::SeriesRow> rows = io::read_series_csv(dir + "/" + csv);
  char title[64];
  std::snprintf(title, sizeof title, "concurrence, alpha = %.6f", init.s());
  if (out.empty()) out = dir + "/set" + std::to_string(set_index) + ".svg";
  io::write_text_file(out, io::render_series_svg(rows, init, title));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_diagnose(bool sampled, std::uint64_t shots, std::uint64_t seed,
                 const std::string& out) {
  std::vector<double> lambdas;
  for (int i = 1; i <= 19; ++i) lambdas.push_back(kPi * 0.05 * i);
  const auto rows = protocol::ancilla_population_diagnostic(
      lambdas, channels::NoiseModel::defaults(), !sampled, shots, seed);
  emit(out, io::diagnostic_csv_text(rows));
  return 0;
}

int cmd_transpile_check(std::uint64_t seed, int count, bool corrupt) {
  gates::TranspileOptions opt;
  opt.corrupt_dressing = corrupt;

  const gates::LocalInvariants cx_inv = gates::local_equivalence_invariants(
      gates::gate_matrix(gates::Gate::cx(0, 1)));
  const gates::LocalInvariants ecr_inv = gates::local_equivalence_invariants(
      gates::gate_matrix(gates::Gate::ecr(0, 1)));
  const bool inv_ok = gates::invariants_equal(cx_inv, ecr_inv, 1e-9);
  std::printf("entangling-class check (CX vs ECR): %s\n",
              inv_ok ? "pass" : "FAIL");

  std::printf("%8s %6s %6s %10s %8s\n", "circuit", "width", "gates",
              "transpiled", "verdict");
  std::vector<int> failures;
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 gen(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    const gates::Circuit c = gates::random_routed_circuit(gen);
    const gates::Circuit t = gates::transpile_to_basis(c, opt);
    bool basis_only = true;
    for (const gates::Gate& g : t.ops)
      if (g.kind == gates::GateKind::CX || g.kind == gates::GateKind::SWAP)
        basis_only = false;
    const bool ok = basis_only &&
                    gates::unitary_equal_up_to_phase(gates::circuit_unitary(t),
                                                     gates::circuit_unitary(c),
                                                     1e-10);
    if (!ok) failures.push_back(i);
    std::printf("%8d %6d %6zu %10zu %8s\n", i, c.n_qubits, c.ops.size(),
                t.ops.size(), ok ? "pass" : "FAIL");
  }
  std::printf("%d/%d circuits matched\n", count - static_cast<int>(failures.size()),
              count);
  if (!failures.empty()) {
    std::printf("failing circuits:");
    for (int i : failures) std::printf(" %d", i);
    std::printf("\n");
  }
  return (!inv_ok || !failures.empty()) ? 1 : 0;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  CLI::App app{"Damped-pair concurrence protocol toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "Simulate the configured sets and write CSV series + manifest");
  std::string config_path;
  run->add_option("--config", config_path, "JSON run configuration")
      ->required();
  std::string out_dir = "out";
  run->add_option("--out", out_dir, "output directory (default: out)");
  std::uint64_t seed_override = 0;
  auto* seed_opt =
      run->add_option("--seed", seed_override, "replace the file seed");
  int sets_override = 0;
  auto* sets_opt =
      run->add_option("--sets", sets_override, "run only the first N sets");
  bool no_mitigation = false;
  run->add_flag("--no-mitigation", no_mitigation,
                "skip readout error mitigation");

  auto* analytic = app.add_subcommand(
      "analytic", "Write the closed-form concurrence curves as CSV");
  std::string alpha_str;
  auto* alpha_opt = analytic->add_option(
      "--alpha", alpha_str, "initial amplitude, written \"1/sqrt(k)\"");
  double lambda = 0.0;
  auto* lambda_opt = analytic->add_option(
      "--lambda", lambda, "initial mixing angle in (0, pi)");
  double grid_min = 0.0, grid_max = 3.0;
  int grid_points = 64;
  analytic->add_option("--min", grid_min, "first gamma*t value (default 0)");
  analytic->add_option("--max", grid_max, "last gamma*t value (default 3)");
  analytic->add_option("--points", grid_points, "grid size (default 64)");
  std::string analytic_out = "-";
  analytic->add_option("--out", analytic_out, "output file, - for stdout");

  auto* plot = app.add_subcommand(
      "plot", "Render one run set as a self-contained SVG");
  std::string plot_dir = "out";
  plot->add_option("--dir", plot_dir, "run output directory (default: out)");
  int plot_set = 0;
  plot->add_option("--set", plot_set, "set index in the manifest (default 0)");
  std::string plot_out;
  plot->add_option("--out", plot_out, "SVG path (default: <dir>/set<k>.svg)");

  auto* diagnose = app.add_subcommand(
      "diagnose",
      "Scan the ancilla reset quality over the preparation angle");
  bool diag_sampled = false;
  diagnose->add_flag("--sampled", diag_sampled,
                     "sample counts instead of exact probabilities");
  std::uint64_t diag_shots = 20000;
  diagnose->add_option("--shots", diag_shots, "shots per point when sampling");
  std::uint64_t diag_seed = 0;
  diagnose->add_option("--seed", diag_seed, "sampling seed");
  std::string diag_out = "-";
  diagnose->add_option("--out", diag_out, "output file, - for stdout");

  auto* tcheck = app.add_subcommand(
      "transpile-check",
      "Verify random circuits against their device-basis rewrites");
  std::uint64_t tc_seed = 1;
  tcheck->add_option("--seed", tc_seed, "circuit generator seed (default 1)");
  int tc_count = 200;
  tcheck->add_option("--count", tc_count, "number of circuits (default 200)");
  bool tc_corrupt = false;
  tcheck->add_flag("--corrupt-dressing", tc_corrupt,
                   "negative control: break the rewrite on purpose");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      io::CliOverrides overrides;
      if (seed_opt->count() > 0) overrides.seed = seed_override;
      if (sets_opt->count() > 0) overrides.sets = sets_override;
      overrides.no_mitigation = no_mitigation;
      return cmd_run(config_path, out_dir, overrides);
    }
    if (analytic->parsed())
      return cmd_analytic(alpha_str, lambda, alpha_opt->count() > 0,
                          lambda_opt->count() > 0, grid_min, grid_max,
                          grid_points, analytic_out);
    if (plot->parsed()) return cmd_plot(plot_dir, plot_set, plot_out);
    if (diagnose->parsed())
      return cmd_diagnose(diag_sampled, diag_shots, diag_seed, diag_out);
    if (tcheck->parsed())
      return cmd_transpile_check(tc_seed, tc_count, tc_corrupt);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace esd::cli
