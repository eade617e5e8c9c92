#include "esdsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "esdsim/errors.hpp"
#include "esdsim/rng.hpp"

namespace esd::protocol {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < kPi))
    throw ConfigError("initial mixing angle must lie in (0, pi)");
}

}  // namespace

QubitLayout QubitLayout::default_wires() { return QubitLayout{}; }

QubitLayout QubitLayout::consecutive(int first) {
  QubitLayout l;
  for (int i = 0; i < 5; ++i) l.physical[i] = first + i;
  l.validate();
  return l;
}

QubitLayout QubitLayout::descending(int first) {
  QubitLayout l;
  for (int i = 0; i < 5; ++i) l.physical[i] = first - i;
  l.validate();
  return l;
}

void QubitLayout::validate() const {
  const int step = physical[1] - physical[0];
  if (step != 1 && step != -1)
    throw ConfigError("layout must be five consecutive wires");
  for (int i = 0; i < 5; ++i) {
    if (physical[i] < 0) throw ConfigError("layout wires must be non-negative");
    if (physical[i] != physical[0] + i * step)
      throw ConfigError("layout must be five consecutive wires");
  }
}

std::array<int, 3> QubitLayout::measured() const {
  return {physical[kSys0], physical[kAncilla], physical[kSys1]};
}

std::vector<std::string> QubitLayout::measurement_labels() const {
  std::vector<std::string> labels;
  for (int wire : measured()) labels.push_back("q" + std::to_string(wire));
  return labels;
}

bool QubitLayout::overlaps(const QubitLayout& other) const {
  for (int a : physical)
    for (int b : other.physical)
      if (a == b) return true;
  return false;
}

void ExperimentConfig::validate() const {
  check_lambda(init.lambda);
  if (grid.empty()) throw ConfigError("at least one grid point is required");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) throw ConfigError("grid values must be non-negative");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw ConfigError("grid values must be strictly increasing");
  }
  if (shots == 0) throw ZeroShots("at least one shot per repetition required");
  if (repetitions < 1) throw ConfigError("at least one repetition is required");
  if (noise) noise->validate();
  layout.validate();
}

gates::Circuit build_prep_circuit(const ent::InitialState& init) {
  check_lambda(init.lambda);
  gates::Circuit c(5);
  gates::append_ry_equivalent(c, kSys0, init.lambda);
  c.add(gates::Gate::cx(kSys0, kAncilla));
  c.add(gates::Gate::cx(kAncilla, kSys1));
  c.add(gates::Gate::cx(kSys1, kAncilla));  // ancilla back to |0>
  return c;
}

void append_witness_stage(gates::Circuit& c) {
  gates::append_hadamard(c, kAncilla);
  c.add(gates::Gate::cx(kAncilla, kSys0));
  c.add(gates::Gate::cx(kAncilla, kSys1));
  // Basis rotation on the ancilla so that reading (0,1,0) on
  // (sys0, ancilla, sys1) picks out the Bell overlap.
  c.add(gates::Gate::rz(kAncilla, kPi));
  c.add(gates::Gate::sqrt_x(kAncilla));
  c.add(gates::Gate::rz(kAncilla, kPi / 2.0));
  c.add(gates::Gate::sqrt_x(kAncilla));
  c.add(gates::Gate::rz(kAncilla, -kPi / 2.0));
}

gates::Circuit build_full_circuit(const ent::InitialState& init, double gamma_t,
                                  Target target) {
  gates::Circuit c = build_prep_circuit(init);
  const channels::DampingParams damp(gamma_t);
  channels::append_damping(c, kSys0, kEnv0, damp);
  channels::append_damping(c, kSys1, kEnv1, damp);
  if (target == Target::Environment) {
    c.add(gates::Gate::swap(kEnv0, kSys0));
    c.add(gates::Gate::swap(kEnv1, kSys1));
  }
  append_witness_stage(c);
  return c;
}

bool witness_stage_check(const std::vector<cplx>& xi, double tol) {
  if (xi.size() != 16)
    throw DimensionMismatch("witness oracle takes 16 amplitudes");
  double n2 = 0.0;
  for (const cplx& a : xi) n2 += std::norm(a);
  if (n2 <= 0.0) throw BadDistribution("witness oracle needs a non-zero state");
  const double inv = 1.0 / std::sqrt(n2);

  // xi bit r -> local qubit: 0->0, 1->1, 2->3, 3->4; ancilla (local 2) = anc.
  auto embed = [](std::uint32_t j, std::uint32_t anc) {
    return (j & 3u) | (anc << 2) | ((j & 12u) << 1);
  };

  std::vector<cplx> amps(32, cplx{0.0, 0.0});
  for (std::uint32_t j = 0; j < 16; ++j) amps[embed(j, 0)] = xi[j] * inv;
  gates::Circuit c(5);
  append_witness_stage(c);
  const sim::StateVector out =
      gates::run_statevector(c, sim::StateVector::from_amplitudes(5, amps));

  std::vector<cplx> want(32, cplx{0.0, 0.0});
  for (std::uint32_t j = 0; j < 16; ++j) {
    const cplx a = xi[j] * inv;
    const cplx b = xi[j ^ 6u] * inv;  // both measured neighbours flipped
    want[embed(j, 0)] = cplx{0.0, 0.5} * (a - b);
    want[embed(j, 1)] = 0.5 * (a + b);
  }

  cplx phase{1.0, 0.0};
  bool found = false;
  for (std::uint32_t i = 0; i < 32 && !found; ++i)
    if (std::abs(want[i]) > 1e-8) {
      phase = out.amp(i) / want[i];
      phase /= std::abs(phase);
      found = true;
    }
  if (!found) return false;
  double err = 0.0;
  for (std::uint32_t i = 0; i < 32; ++i)
    err = std::max(err, std::abs(out.amp(i) - phase * want[i]));
  return err <= tol;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const bool noisy = cfg.noise.has_value();
  res.mitigated = cfg.mitigation && noisy;

  const std::vector<int> measured{kSys0, kAncilla, kSys1};
  const std::vector<std::string> labels = cfg.layout.measurement_labels();
  const std::array<int, 3> wires = cfg.layout.measured();
  const std::vector<int> wire_list(wires.begin(), wires.end());
  gates::TranspileOptions opt;
  opt.reset_aware_swap = cfg.reset_aware_swap;

  std::optional<channels::CalibrationMatrix> cal;
  if (res.mitigated)
    cal = cfg.exact
              ? channels::exact_calibration(*cfg.noise, wire_list, labels)
              : channels::build_calibration(*cfg.noise, wire_list, labels,
                                            cfg.shots,
                                            derive_seed(cfg.seed, {0, 0, 3}));

  for (const Target target : {Target::System, Target::Environment}) {
    const std::uint64_t target_code = target == Target::System ? 1 : 2;
    ConcurrenceSeries series;
    series.target = target;
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
      const double gamma_t = cfg.grid[gi];
      const gates::Circuit circuit =
          build_full_circuit(cfg.init, gamma_t, target);
      sim::Distribution dist;
      if (noisy) {
        const sim::DensityMatrix rho =
            channels::run_density(circuit, *cfg.noise, opt);
        dist = sim::marginal_distribution(rho, measured, labels);
        dist = channels::apply_readout_noise(dist, *cfg.noise, wire_list);
      } else {
        const sim::StateVector psi =
            gates::run_statevector(gates::transpile_to_basis(circuit, opt));
        dist = sim::marginal_distribution(psi, measured, labels);
      }

      SeriesPoint pt;
      pt.gamma_t = gamma_t;
      if (cfg.exact) {
        const ent::ConcurrenceEstimate est = ent::concurrence_from_distribution(
            res.mitigated ? channels::mitigate(dist, *cal) : dist);
        pt.mean = est.value;
        pt.p010 = est.p010;
        if (est.quality_warning) ++res.quality_warnings;
      } else {
        std::vector<double> values;
        values.reserve(cfg.repetitions);
        double p_sum = 0.0;
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
          const std::uint64_t seed = derive_seed(
              cfg.seed, {static_cast<std::uint64_t>(rep), gi, target_code});
          const sim::CountsHistogram hist =
              sim::sample_counts(dist, cfg.shots, seed);
          const ent::ConcurrenceEstimate est =
              res.mitigated
                  ? ent::concurrence_from_distribution(
                        channels::mitigate(sim::to_distribution(hist), *cal),
                        cfg.shots)
                  : ent::concurrence_from_counts(hist);
          values.push_back(est.value);
          p_sum += est.p010;
          if (est.quality_warning) ++res.quality_warnings;
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        const double sd = values.size() > 1
                              ? std::sqrt(var / (values.size() - 1.0))
                              : 0.0;
        pt.mean = mean;
        pt.stderr_ = sd / std::sqrt(static_cast<double>(values.size()));
        pt.p010 = p_sum / static_cast<double>(values.size());
      }
      series.points.push_back(pt);
    }
    (target == Target::System ? res.system : res.environment) =
        std::move(series);
  }
  return res;
}

std::vector<std::pair<double, double>> ancilla_population_diagnostic(
    const std::vector<double>& lambdas, const channels::NoiseModel& noise,
    bool exact, std::uint64_t shots, std::uint64_t seed) {
  noise.validate();
  if (!exact && shots == 0)
    throw ZeroShots("sampled diagnostic needs at least one shot");
  std::vector<std::pair<double, double>> out;
  out.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const ent::InitialState init = ent::InitialState::from_lambda(lambdas[i]);
    const sim::DensityMatrix rho =
        channels::run_density(build_prep_circuit(init), noise);
    sim::Distribution dist = sim::marginal_distribution(rho, {kAncilla});
    double p0;
    if (exact) {
      p0 = dist.p[0];
    } else {
      dist = channels::apply_readout_noise(dist, noise, {kAncilla});
      const sim::CountsHistogram hist =
          sim::sample_counts(dist, shots, derive_seed(seed, {i}));
      const auto it = hist.counts.find("0");
      p0 = it == hist.counts.end()
               ? 0.0
               : static_cast<double>(it->second) / static_cast<double>(shots);
    }
    out.emplace_back(lambdas[i] / kPi, p0);
  }
  return out;
}

std::vector<ExperimentResult> parallel_sets_run(
    const std::vector<ExperimentConfig>& configs) {
  for (const ExperimentConfig& cfg : configs) cfg.validate();
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (std::size_t j = i + 1; j < configs.size(); ++j)
      if (configs[i].layout.overlaps(configs[j].layout))
        throw OverlappingLayouts("parallel sets must use disjoint wires");
  std::vector<std::future<ExperimentResult>> futures;
  futures.reserve(configs.size());
  for (const ExperimentConfig& cfg : configs)
    futures.push_back(std::async(std::launch::async,
                                 [&cfg] { return run_experiment(cfg); }));
  std::vector<ExperimentResult> results;
  results.reserve(configs.size());
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

}  // namespace esd::protocol
