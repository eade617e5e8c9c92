// Acceptance gate. Each numbered check prints exactly one PASS/FAIL line;
// the exit code is the number of failures. argv[1] names the default run
// file used by the determinism check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "esdsim/channels.hpp"
#include "esdsim/cli.hpp"
#include "esdsim/config.hpp"
#include "esdsim/csvio.hpp"
#include "esdsim/entanglement.hpp"
#include "esdsim/errors.hpp"
#include "esdsim/gates.hpp"
#include "esdsim/protocol.hpp"
#include "esdsim/rng.hpp"
#include "esdsim/simcore.hpp"

using namespace esd;
using protocol::Target;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  g.back() = hi;
  return g;
}

std::vector<ent::InitialState> standard_states() {
  return {ent::InitialState::from_alpha(1.0 / std::sqrt(2.0)),
          ent::InitialState::from_alpha(1.0 / std::sqrt(3.0)),
          ent::InitialState::from_alpha(1.0 / std::sqrt(5.0))};
}

double closed_c(const ent::InitialState& init, double t, Target target) {
  return target == Target::System ? ent::closed_concurrence_system(init, t)
                                  : ent::closed_concurrence_environment(init, t);
}

double closed_p010(const ent::InitialState& init, double t, Target target) {
  const double p_phi = target == Target::System
                           ? ent::closed_p_phi_system(init, t)
                           : ent::closed_p_phi_environment(init, t);
  return 0.5 * p_phi;
}

const protocol::ConcurrenceSeries& series_for(
    const protocol::ExperimentResult& res, Target target) {
  return target == Target::System ? res.system : res.environment;
}

// Root of f (which must change sign across [lo, hi]) by plain halving.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// First index i with v[i] and v[i+1] both past the threshold (below when
// `downward`, above otherwise); v.size() when the series never settles.
std::size_t debounced_cross(const std::vector<double>& v, bool downward,
                            double thr = 0.01) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const bool here = downward ? v[i] < thr : v[i] > thr;
    const bool next = downward ? v[i + 1] < thr : v[i + 1] > thr;
    if (here && next) return i;
  }
  return v.size();
}

std::vector<double> means_of(const protocol::ConcurrenceSeries& s) {
  std::vector<double> v;
  v.reserve(s.points.size());
  for (const protocol::SeriesPoint& p : s.points) v.push_back(p.mean);
  return v;
}

double total_variation(const sim::Distribution& a, const sim::Distribution& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.p.size(); ++i) tv += std::abs(a.p[i] - b.p[i]);
  return 0.5 * tv;
}

struct Gate10 {
  int failures = 0;

  void run(int number, const std::string& label,
           const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

char buf_text[160];

std::string fmt(const char* format, double a, double b = 0.0) {
  std::snprintf(buf_text, sizeof buf_text, format, a, b);
  return buf_text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <default-run-config.json>\n", argv[0]);
    return 99;
  }
  const std::string default_config = argv[1];
  Gate10 gate;

  // 1. The X-form concurrence of the analytic damped-pair state equals the
  //    closed-form curve everywhere.
  gate.run(1, "closed-form concurrence matches X-form evaluation",
           [&](std::string& detail) {
    const auto t0 = Clock::now();
    const std::vector<double> grid = linspace(0.0, 3.0, 64);
    double worst = 0.0;
    for (const ent::InitialState& init : standard_states())
      for (double t : grid)
        worst = std::max(
            worst,
            std::abs(ent::concurrence_xstate(ent::analytic_rho_system(init, t)) -
                     ent::closed_concurrence_system(init, t)));
    const double dt = seconds_since(t0);
    detail = fmt("max |dC| = %.2e in %.2f s", worst, dt);
    return worst <= 1e-12 && dt < 1.0;
  });

  // 2. Noiseless end-to-end Born probabilities reproduce the closed-form
  //    concurrence through max(0, 4 p010 - 1) for both pairings.
  gate.run(2, "witness identity holds end to end",
           [&](std::string& detail) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const ent::InitialState& init : standard_states()) {
      protocol::ExperimentConfig cfg;
      cfg.init = init;
      cfg.grid = linspace(0.0, 3.0, 16);
      cfg.exact = true;
      const protocol::ExperimentResult res = protocol::run_experiment(cfg);
      for (Target target : {Target::System, Target::Environment}) {
        const auto& pts = series_for(res, target).points;
        for (std::size_t i = 0; i < pts.size(); ++i)
          worst = std::max(worst, std::abs(pts[i].mean -
                                           closed_c(init, cfg.grid[i], target)));
      }
    }
    const double dt = seconds_since(t0);
    detail = fmt("max |dC| = %.2e in %.2f s", worst, dt);
    return worst <= 1e-10 && dt < 10.0;
  });

  // 3. Critical times: frozen values/orderings, and closed form vs bisection.
  gate.run(3, "death and birth times match closed form and bisection",
           [&](std::string& detail) {
    const ent::InitialState i5 = ent::InitialState::from_alpha(1.0 / std::sqrt(5.0));
    const ent::InitialState i3 = ent::InitialState::from_alpha(1.0 / std::sqrt(3.0));
    const double ln2 = std::log(2.0);

    const auto td5 = ent::esd_time(i5);
    const auto tb5 = ent::esb_time(i5);
    const auto td3 = ent::esd_time(i3);
    const auto tb3 = ent::esb_time(i3);
    if (!td5 || !tb5 || !td3 || !tb3) {
      detail = "a critical time is unexpectedly absent";
      return false;
    }
    bool ok = std::abs(*td5 - ln2) <= 1e-12 && std::abs(*tb5 - ln2) <= 1e-12;
    ok = ok && std::abs(*tb3 - 0.5 * ln2) <= 1e-12;
    ok = ok && std::abs(*td3 - (-std::log(1.0 - 1.0 / std::sqrt(2.0)))) <= 1e-12;
    ok = ok && *tb3 < *td3;
    const ent::InitialState i2 = ent::InitialState::from_alpha(1.0 / std::sqrt(2.0));
    ok = ok && !ent::esd_time(i2).has_value() && !ent::esb_time(i2).has_value();

    double worst = 0.0;
    for (const ent::InitialState& init : {i5, i3}) {
      const auto margin_sys = [&](double t) {
        return 2.0 * ent::closed_p_phi_system(init, t) - 1.0;
      };
      const auto margin_env = [&](double t) {
        return 2.0 * ent::closed_p_phi_environment(init, t) - 1.0;
      };
      worst = std::max(worst, std::abs(bisect(margin_sys, 1e-6, 30.0) -
                                       *ent::esd_time(init)));
      worst = std::max(worst, std::abs(bisect(margin_env, 1e-6, 30.0) -
                                       *ent::esb_time(init)));
    }
    detail = fmt("bisection vs closed form: max |dt| = %.2e", worst);
    return ok && worst <= 1e-9;
  });

  // 4. Balanced initial state: decay exp(-2 gamma t) and growth
  //    (1 - exp(-gamma t))^2, exactly in exact mode and within shot noise
  //    when sampled at 20000 shots x 10 repetitions.
  gate.run(4, "balanced-state asymptotics (exact and sampled)",
           [&](std::string& detail) {
    const ent::InitialState i2 = ent::InitialState::from_alpha(1.0 / std::sqrt(2.0));
    const std::vector<double> grid = linspace(0.0, 3.0, 16);

    protocol::ExperimentConfig cfg;
    cfg.init = i2;
    cfg.grid = grid;
    cfg.exact = true;
    const protocol::ExperimentResult exact = protocol::run_experiment(cfg);
    double worst_exact = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      worst_exact = std::max(worst_exact, std::abs(exact.system.points[i].mean -
                                                   std::exp(-2.0 * t)));
      const double growth = (1.0 - std::exp(-t)) * (1.0 - std::exp(-t));
      worst_exact = std::max(worst_exact,
                             std::abs(exact.environment.points[i].mean - growth));
    }

    cfg.exact = false;
    cfg.shots = 20000;
    cfg.repetitions = 10;
    cfg.seed = 2026;
    const protocol::ExperimentResult sampled = protocol::run_experiment(cfg);
    bool sampled_ok = true;
    double worst_pull = 0.0;
    for (Target target : {Target::System, Target::Environment}) {
      const auto& pts = series_for(sampled, target).points;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = closed_p010(i2, grid[i], target);
        const double sigma_mean =
            4.0 * std::sqrt(p * (1.0 - p) / 20000.0) / std::sqrt(10.0);
        const double dev = std::abs(pts[i].mean - closed_c(i2, grid[i], target));
        worst_pull = std::max(worst_pull, dev / sigma_mean);
        sampled_ok = sampled_ok && dev <= 3.0 * sigma_mean;
      }
    }
    detail = fmt("exact max |dC| = %.2e, sampled worst pull = %.2f sigma",
                 worst_exact, worst_pull);
    return worst_exact <= 1e-10 && sampled_ok;
  });

  // 5. Across a 20-seed panel, sampled means sit within three combined
  //    standard errors of the closed form at >= 95% of grid points.
  gate.run(5, "shot-noise statistics over a 20-seed panel",
           [&](std::string& detail) {
    const auto t0 = Clock::now();
    const ent::InitialState i3 = ent::InitialState::from_alpha(1.0 / std::sqrt(3.0));
    const std::vector<double> grid = linspace(0.0, 3.0, 16);
    int inside = 0, total = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
      protocol::ExperimentConfig cfg;
      cfg.init = i3;
      cfg.grid = grid;
      cfg.shots = 20000;
      cfg.repetitions = 10;
      cfg.seed = seed;
      const protocol::ExperimentResult res = protocol::run_experiment(cfg);
      for (Target target : {Target::System, Target::Environment}) {
        const auto& pts = series_for(res, target).points;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double p = closed_p010(i3, grid[i], target);
          const double theory =
              4.0 * std::sqrt(p * (1.0 - p) / 20000.0) / std::sqrt(10.0);
          const double sigma = std::sqrt(theory * theory +
                                         pts[i].stderr_ * pts[i].stderr_);
          const double dev = std::abs(pts[i].mean - closed_c(i3, grid[i], target));
          ++total;
          if (dev <= 3.0 * sigma) ++inside;
        }
      }
    }
    const double dt = seconds_since(t0);
    const double frac = static_cast<double>(inside) / total;
    detail = fmt("%.1f%% of 640 points inside, %.1f s", 100.0 * frac, dt);
    return frac >= 0.95 && dt < 120.0;
  });

  // 6. Default noise model, qualitative effects:
  //    (a) the ancilla reset is imperfect at every tested angle,
  //    (b) the debounced death moves earlier and the birth moves later,
  //    (c) amplitudes are depleted at every grid point past zero.
  gate.run(6, "noise leaves the expected qualitative fingerprints",
           [&](std::string& detail) {
    const channels::NoiseModel noisy = channels::NoiseModel::defaults();
    // (a) ancilla ground population under gate noise.
    std::vector<double> lambdas;
    for (int i = 1; i <= 19; ++i) lambdas.push_back(M_PI * 0.05 * i);
    const auto diag =
        protocol::ancilla_population_diagnostic(lambdas, noisy, true, 1, 0);
    bool reset_imperfect = diag.size() == lambdas.size();
    double max_p0 = 0.0;
    for (const auto& entry : diag) {
      max_p0 = std::max(max_p0, entry.second);
      reset_imperfect =
          reset_imperfect && entry.second < 1.0 - 1e-6 && entry.second > 0.5;
    }

    // (b) debounced crossings against the noiseless reference.
    bool crossings_ok = true;
    const std::vector<double> grid = linspace(0.0, 3.0, 16);
    for (double a : {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(5.0)}) {
      const ent::InitialState init = ent::InitialState::from_alpha(a);
      protocol::ExperimentConfig cfg;
      cfg.init = init;
      cfg.grid = grid;
      cfg.shots = 20000;
      cfg.repetitions = 10;
      cfg.seed = 7;
      cfg.noise = noisy;
      cfg.mitigation = true;
      const protocol::ExperimentResult res = protocol::run_experiment(cfg);

      std::vector<double> closed_sys, closed_env;
      for (double t : grid) {
        closed_sys.push_back(ent::closed_concurrence_system(init, t));
        closed_env.push_back(ent::closed_concurrence_environment(init, t));
      }
      const std::size_t death_ref = debounced_cross(closed_sys, true);
      const std::size_t death_noisy = debounced_cross(means_of(res.system), true);
      const std::size_t birth_ref = debounced_cross(closed_env, false);
      const std::size_t birth_noisy =
          debounced_cross(means_of(res.environment), false);
      crossings_ok = crossings_ok && death_noisy < death_ref &&
                     death_ref < grid.size() && birth_noisy > birth_ref &&
                     birth_noisy < grid.size();
    }

    // (c) depletion in exact mode (mitigation cancels readout, the
    //     depolarizing part must only ever lower the estimate).
    bool depleted = true;
    for (const ent::InitialState& init : standard_states()) {
      protocol::ExperimentConfig cfg;
      cfg.init = init;
      cfg.grid = grid;
      cfg.exact = true;
      cfg.noise = noisy;
      cfg.mitigation = true;
      const protocol::ExperimentResult res = protocol::run_experiment(cfg);
      for (Target target : {Target::System, Target::Environment}) {
        const auto& pts = series_for(res, target).points;
        for (std::size_t i = 1; i < grid.size(); ++i) {
          const double clean = closed_c(init, grid[i], target);
          depleted = depleted && pts[i].mean <= clean + 1e-12;
          if (clean > 1e-9) depleted = depleted && pts[i].mean < clean;
        }
      }
    }
    detail = fmt("max ancilla P0 = %.6f", max_p0);
    if (!reset_imperfect) detail += "; reset check failed";
    if (!crossings_ok) detail += "; crossing order check failed";
    if (!depleted) detail += "; depletion check failed";
    return reset_imperfect && crossings_ok && depleted;
  });

  // 7. Readout-only noise: mitigation beats no mitigation on >= 80% of
  //    points, and unfolding a sampled distribution recovers the truth to
  //    0.01 total variation at one million shots.
  gate.run(7, "readout mitigation earns its keep",
           [&](std::string& detail) {
    channels::NoiseModel ro;
    ro.readout = channels::readout_from_flips(0.02, 0.03);

    int wins = 0, total = 0;
    const std::vector<double> grid = linspace(0.0, 3.0, 16);
    for (const ent::InitialState& init : standard_states()) {
      protocol::ExperimentConfig cfg;
      cfg.init = init;
      cfg.grid = grid;
      cfg.shots = 20000;
      cfg.repetitions = 10;
      cfg.seed = 11;
      cfg.noise = ro;
      cfg.mitigation = true;
      const protocol::ExperimentResult with = protocol::run_experiment(cfg);
      cfg.mitigation = false;
      const protocol::ExperimentResult without = protocol::run_experiment(cfg);
      for (Target target : {Target::System, Target::Environment}) {
        const auto& pm = series_for(with, target).points;
        const auto& pu = series_for(without, target).points;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double truth = closed_c(init, grid[i], target);
          ++total;
          if (std::abs(pm[i].mean - truth) <= std::abs(pu[i].mean - truth))
            ++wins;
        }
      }
    }

    const ent::InitialState i3 = ent::InitialState::from_alpha(1.0 / std::sqrt(3.0));
    gates::Circuit circuit =
        protocol::build_full_circuit(i3, 0.8, Target::System);
    const sim::StateVector sv =
        gates::run_statevector(gates::transpile_to_basis(circuit));
    const sim::Distribution truth = sim::marginal_distribution(sv, {1, 2, 3});
    const sim::Distribution observed =
        channels::apply_readout_noise(truth, ro, {1, 2, 3});
    const sim::CountsHistogram hist =
        sim::sample_counts(observed, 1000000, derive_seed(13, {7}));
    const sim::Distribution recovered = channels::mitigate(
        sim::to_distribution(hist),
        channels::exact_calibration(ro, {1, 2, 3}, observed.labels));
    const double tv = total_variation(recovered, truth);

    const double frac = static_cast<double>(wins) / total;
    detail = fmt("mitigation no worse at %.1f%% of points, recovery TV = %.4f",
                 100.0 * frac, tv);
    return frac >= 0.80 && tv <= 0.01;
  });

  // 8. Transpiler: 200 seeded random circuits survive the rewrite up to a
  //    global phase, and ECR is locally equivalent to CX.
  gate.run(8, "transpiled circuits stay equivalent; ECR is CX-class",
           [&](std::string& detail) {
    std::mt19937_64 gen(1);
    int passed = 0;
    for (int i = 0; i < 200; ++i) {
      const gates::Circuit c = gates::random_routed_circuit(gen);
      const gates::Circuit t = gates::transpile_to_basis(c);
      bool basis_ok = true;
      for (const gates::Gate& g : t.ops)
        basis_ok = basis_ok && g.kind != gates::GateKind::CX &&
                   g.kind != gates::GateKind::SWAP;
      if (basis_ok && gates::unitary_equal_up_to_phase(
                          gates::circuit_unitary(c), gates::circuit_unitary(t),
                          1e-10))
        ++passed;
    }
    const gates::LocalInvariants ecr = gates::local_equivalence_invariants(
        gates::gate_matrix(gates::Gate::ecr(0, 1)));
    const gates::LocalInvariants cx = gates::local_equivalence_invariants(
        gates::gate_matrix(gates::Gate::cx(0, 1)));
    const bool ecr_ok = gates::invariants_equal(ecr, cx, 1e-9) &&
                        std::abs(ecr.g1) <= 1e-9 &&
                        std::abs(ecr.g2 - 1.0) <= 1e-9;
    detail = fmt("%.0f/200 circuits equivalent", static_cast<double>(passed));
    return passed == 200 && ecr_ok;
  });

  // 9. The analytic pair states match partial traces of the exact four-qubit
  //    purification.
  gate.run(9, "analytic reduced states match the brute-force purification",
           [&](std::string& detail) {
    double worst = 0.0;
    for (const ent::InitialState& init : standard_states()) {
      const double s = init.s(), c = init.c();
      for (double t : linspace(0.0, 3.0, 64)) {
        const channels::DampingParams dp(t);
        const double eta = dp.eta(), zeta = dp.zeta();
        // Plain tensor calculus: each excited half decays independently,
        // qubit order (env0, sys0, sys1, env1) from low bit to high.
        std::vector<cplx> amps(16, 0.0);
        amps[0] = s;
        amps[6] = c * eta * eta;    // sys0=1, sys1=1
        amps[10] = c * eta * zeta;  // sys0=1, env1=1
        amps[5] = c * zeta * eta;   // env0=1, sys1=1
        amps[9] = c * zeta * zeta;  // env0=1, env1=1
        const sim::DensityMatrix rho =
            sim::StateVector::from_amplitudes(4, amps).to_density();
        worst = std::max(worst,
                         max_abs_diff(sim::partial_trace(rho, {1, 2}).matrix(),
                                      ent::analytic_rho_system(init, t)));
        worst = std::max(worst,
                         max_abs_diff(sim::partial_trace(rho, {0, 3}).matrix(),
                                      ent::analytic_rho_environment(init, t)));
      }
    }
    detail = fmt("max entry difference = %.2e", worst);
    return worst <= 1e-10;
  });

  // 10. The command-line runner is deterministic: two runs of the default
  //     configuration produce byte-identical outputs.
  gate.run(10, "repeated runs are byte-identical",
           [&](std::string& detail) {
    namespace fs = std::filesystem;
    for (const char* dir : {"acc_run_a", "acc_run_b"}) {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
    const char* argv_a[] = {"esdsim", "run", "--config",
                            default_config.c_str(), "--out", "acc_run_a"};
    const char* argv_b[] = {"esdsim", "run", "--config",
                            default_config.c_str(), "--out", "acc_run_b"};
    if (cli::run_main(6, argv_a) != 0 || cli::run_main(6, argv_b) != 0) {
      detail = "runner returned a nonzero exit code";
      return false;
    }
    for (const std::string name :
         {"set0.csv", "set1.csv", "set2.csv", "manifest.json"}) {
      const std::string a = io::read_text_file("acc_run_a/" + name);
      const std::string b = io::read_text_file("acc_run_b/" + name);
      if (a.empty() || a != b) {
        detail = name + " differs between runs";
        return false;
      }
    }
    detail = "three series files and the manifest match";
    return true;
  });

  std::printf("%d of 10 criteria failed\n", gate.failures);
  return gate.failures;
}
