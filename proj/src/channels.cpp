#include "esdsim/channels.hpp"

#include <algorithm>
#include <cmath>

#include "esdsim/errors.hpp"
#include "esdsim/rng.hpp"

namespace esd::channels {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw BadProbability(what);
}

void check_readout(const ReadoutMatrix& m) {
  for (const auto& row : m) {
    check_probability(row[0], "readout matrix entry outside [0, 1]");
    check_probability(row[1], "readout matrix entry outside [0, 1]");
    if (std::abs(row[0] + row[1] - 1.0) > 1e-9)
      throw BadProbability("readout matrix row does not sum to 1");
  }
}

}  // namespace

DampingParams::DampingParams(double gt) : gamma_t(gt) {
  if (gt < 0.0) throw NegativeTime("damping duration must be non-negative");
}

double DampingParams::eta() const { return std::exp(-0.5 * gamma_t); }
double DampingParams::zeta() const { return std::sqrt(1.0 - std::exp(-gamma_t)); }
double DampingParams::theta() const { return std::asin(eta()); }
double DampingParams::angle() const { return 2.0 * std::acos(eta()); }

void append_damping(gates::Circuit& c, int system, int partner,
                    const DampingParams& p) {
  const double phi = p.angle();
  c.add(gates::Gate::cx(system, partner));
  gates::append_ry(c, partner, -0.5 * phi);
  c.add(gates::Gate::cx(system, partner));
  gates::append_ry(c, partner, 0.5 * phi);
  c.add(gates::Gate::cx(partner, system));
}

gates::Circuit build_damping_circuit(int n_qubits, int system, int partner,
                                     const DampingParams& p) {
  gates::Circuit c(n_qubits);
  append_damping(c, system, partner, p);
  return c;
}

ReadoutMatrix readout_from_flips(double p01, double p10) {
  ReadoutMatrix m{{{1.0 - p01, p01}, {p10, 1.0 - p10}}};
  check_readout(m);
  return m;
}

NoiseModel NoiseModel::defaults() {
  NoiseModel n;
  n.p1 = 0.001;
  n.p2 = 0.01;
  n.readout = readout_from_flips(0.02, 0.03);
  return n;
}

const ReadoutMatrix& NoiseModel::readout_for(int qubit) const {
  auto it = readout_per_qubit.find(qubit);
  return it == readout_per_qubit.end() ? readout : it->second;
}

bool NoiseModel::trivial_readout() const {
  auto is_identity = [](const ReadoutMatrix& m) {
    return m[0][0] == 1.0 && m[0][1] == 0.0 && m[1][0] == 0.0 && m[1][1] == 1.0;
  };
  if (!is_identity(readout)) return false;
  return std::all_of(readout_per_qubit.begin(), readout_per_qubit.end(),
                     [&](const auto& kv) { return is_identity(kv.second); });
}

void NoiseModel::validate() const {
  check_probability(p1, "one-qubit depolarizing strength outside [0, 1]");
  check_probability(p2, "two-qubit depolarizing strength outside [0, 1]");
  check_readout(readout);
  for (const auto& [q, m] : readout_per_qubit) {
    if (q < 0) throw BadProbability("readout override on a negative qubit");
    check_readout(m);
  }
}

sim::DensityMatrix apply_depolarizing(const sim::DensityMatrix& rho,
                                      const std::vector<int>& targets,
                                      double p) {
  check_probability(p, "depolarizing strength outside [0, 1]");
  const int n = rho.n_qubits();
  std::vector<int> t = targets;
  std::sort(t.begin(), t.end());
  if (t.empty() || t.size() > 2 ||
      std::adjacent_find(t.begin(), t.end()) != t.end())
    throw BadTarget("depolarizing channel needs one or two distinct targets");
  for (int q : t)
    if (q < 0 || q >= n) throw BadTarget("depolarizing target out of range");
  if (p == 0.0) return rho;

  const std::size_t dim = rho.dim();
  const std::size_t k = t.size();
  std::uint32_t target_mask = 0;
  for (int q : t) target_mask |= 1u << q;

  auto target_bits = [&](std::uint32_t i) {
    std::uint32_t b = 0;
    for (std::size_t r = 0; r < k; ++r) b |= ((i >> t[r]) & 1u) << r;
    return b;
  };
  auto with_target_bits = [&](std::uint32_t i, std::uint32_t b) {
    std::uint32_t out = i & ~target_mask;
    for (std::size_t r = 0; r < k; ++r) out |= ((b >> r) & 1u) << t[r];
    return out;
  };

  // (1-p) rho + p * (I/2^k on targets) (x) tr_targets(rho).
  const CMatrix& m = rho.matrix();
  CMatrix out(dim, dim);
  const double mix = p / static_cast<double>(std::size_t{1} << k);
  for (std::uint32_t i = 0; i < dim; ++i)
    for (std::uint32_t j = 0; j < dim; ++j) {
      cplx v = (1.0 - p) * m(i, j);
      if (target_bits(i) == target_bits(j)) {
        cplx s = 0.0;
        for (std::uint32_t b = 0; b < (1u << k); ++b)
          s += m(with_target_bits(i, b), with_target_bits(j, b));
        v += mix * s;
      }
      out(i, j) = v;
    }
  return sim::DensityMatrix::from_matrix(n, std::move(out));
}

sim::Distribution apply_readout_noise(const sim::Distribution& dist,
                                      const NoiseModel& noise,
                                      const std::vector<int>& qubits) {
  dist.validate();
  noise.validate();
  if (qubits.size() != dist.labels.size())
    throw DimensionMismatch("one physical qubit per measured label required");
  const std::size_t m = qubits.size();
  const std::size_t dim = dist.p.size();
  sim::Distribution out{dist.labels, std::vector<double>(dim, 0.0)};
  for (std::uint32_t truth = 0; truth < dim; ++truth) {
    if (dist.p[truth] == 0.0) continue;
    for (std::uint32_t obs = 0; obs < dim; ++obs) {
      double w = dist.p[truth];
      for (std::size_t r = 0; r < m; ++r)
        w *= noise.readout_for(qubits[r])[(truth >> r) & 1u][(obs >> r) & 1u];
      out.p[obs] += w;
    }
  }
  return out;
}

void CalibrationMatrix::validate() const {
  const std::size_t dim = std::size_t{1} << labels.size();
  if (matrix.size() != dim)
    throw DimensionMismatch("calibration matrix has the wrong size");
  for (std::size_t truth = 0; truth < dim; ++truth) {
    double col = 0.0;
    for (std::size_t obs = 0; obs < dim; ++obs) {
      if (matrix[obs].size() != dim)
        throw DimensionMismatch("calibration matrix has the wrong size");
      const double v = matrix[obs][truth];
      if (!(v >= 0.0 && v <= 1.0 + 1e-12))
        throw BadProbability("calibration entry outside [0, 1]");
      col += v;
    }
    if (std::abs(col - 1.0) > 1e-9)
      throw BadProbability("calibration column does not sum to 1");
  }
}

CalibrationMatrix exact_calibration(const NoiseModel& noise,
                                    const std::vector<int>& qubits,
                                    const std::vector<std::string>& labels) {
  noise.validate();
  if (qubits.size() != labels.size())
    throw DimensionMismatch("one physical qubit per measured label required");
  const std::size_t m = qubits.size();
  const std::size_t dim = std::size_t{1} << m;
  CalibrationMatrix cal;
  cal.labels = labels;
  cal.matrix.assign(dim, std::vector<double>(dim, 0.0));
  for (std::uint32_t obs = 0; obs < dim; ++obs)
    for (std::uint32_t truth = 0; truth < dim; ++truth) {
      double w = 1.0;
      for (std::size_t r = 0; r < m; ++r)
        w *= noise.readout_for(qubits[r])[(truth >> r) & 1u][(obs >> r) & 1u];
      cal.matrix[obs][truth] = w;
    }
  cal.validate();
  return cal;
}

CalibrationMatrix build_calibration(const NoiseModel& noise,
                                    const std::vector<int>& qubits,
                                    const std::vector<std::string>& labels,
                                    std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ZeroShots("calibration needs at least one shot");
  noise.validate();
  if (qubits.size() != labels.size())
    throw DimensionMismatch("one physical qubit per measured label required");
  const std::size_t m = qubits.size();
  const std::size_t dim = std::size_t{1} << m;
  CalibrationMatrix cal;
  cal.labels = labels;
  cal.matrix.assign(dim, std::vector<double>(dim, 0.0));
  for (std::uint32_t truth = 0; truth < dim; ++truth) {
    sim::Distribution one_hot{labels, std::vector<double>(dim, 0.0)};
    one_hot.p[truth] = 1.0;
    const sim::Distribution noisy = apply_readout_noise(one_hot, noise, qubits);
    const sim::CountsHistogram hist =
        sim::sample_counts(noisy, shots, derive_seed(seed, {truth}));
    for (const auto& [key, count] : hist.counts)
      cal.matrix[sim::outcome_index(key)][truth] =
          static_cast<double>(count) / static_cast<double>(shots);
  }
  cal.validate();
  return cal;
}

sim::Distribution mitigate(const sim::Distribution& observed,
                           const CalibrationMatrix& cal) {
  observed.validate();
  cal.validate();
  if (observed.labels != cal.labels)
    throw LabelMismatch("calibration was taken over different labels");
  const std::size_t dim = observed.p.size();
  std::vector<double> flat(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) flat[i * dim + j] = cal.matrix[i][j];
  std::vector<double> x;
  try {
    x = nnls(flat, dim, dim, observed.p);
  } catch (const Error&) {
    throw SingularCalibration("calibration matrix is rank deficient");
  }
  double total = 0.0;
  for (double v : x) total += v;
  if (total <= 1e-12)
    throw SingularCalibration("unfolded distribution has no weight");
  sim::Distribution out{observed.labels, std::move(x)};
  for (double& v : out.p) v /= total;
  out.validate();
  return out;
}

sim::DensityMatrix run_density(const gates::Circuit& c, const NoiseModel& noise,
                               const gates::TranspileOptions& opt) {
  noise.validate();
  const gates::Circuit compiled = gates::transpile_to_basis(c, opt);
  sim::DensityMatrix rho(compiled.n_qubits);
  for (const gates::Gate& g : compiled.ops) {
    rho = sim::apply_unitary(rho, gates::gate_matrix(g), g.targets());
    const double p = g.two_qubit() ? noise.p2 : noise.p1;
    if (p > 0.0) rho = apply_depolarizing(rho, g.targets(), p);
  }
  return rho;
}

}  // namespace esd::channels
