#include "esdsim/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "esdsim/errors.hpp"
#include "esdsim/rng.hpp"

namespace esd::sim {

namespace {

void check_register_width(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw BadTarget("register width must be between 1 and 5 qubits");
}

void check_targets(const std::vector<int>& targets, int n_qubits) {
  if (targets.empty() || targets.size() > 2)
    throw BadTarget("expected one or two target qubits");
  for (int t : targets)
    if (t < 0 || t >= n_qubits) throw BadTarget("target qubit out of range");
  if (targets.size() == 2 && targets[0] == targets[1])
    throw BadTarget("repeated target qubit");
}

void check_measured(const std::vector<int>& measured, int n_qubits) {
  if (measured.empty()) throw BadTarget("empty measurement list");
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (measured[i] < 0 || measured[i] >= n_qubits)
      throw BadTarget("measured qubit out of range");
    for (std::size_t j = i + 1; j < measured.size(); ++j)
      if (measured[i] == measured[j]) throw BadTarget("repeated measured qubit");
  }
}

void check_gate_shape(const CMatrix& u, std::size_t n_targets) {
  const std::size_t want = std::size_t{1} << n_targets;
  if (u.rows() != want || u.cols() != want)
    throw DimensionMismatch("gate matrix shape does not match target count");
  if (u.unitarity_defect() > 1e-12)
    throw NonUnitary("gate matrix is not unitary within 1e-12");
}

std::vector<std::string> default_labels(const std::vector<int>& measured) {
  std::vector<std::string> labels;
  labels.reserve(measured.size());
  for (int q : measured) labels.push_back("q" + std::to_string(q));
  return labels;
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_register_width(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, cplx{});
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, std::uint32_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw BadTarget("basis state index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<cplx> amps) {
  StateVector s(n_qubits);
  if (amps.size() != s.dim())
    throw DimensionMismatch("amplitude vector length does not match width");
  s.amps_ = std::move(amps);
  s.validate(1e-9);
  return s;
}

double StateVector::norm() const {
  double n2 = 0.0;
  for (const auto& a : amps_) n2 += std::norm(a);
  return std::sqrt(n2);
}

void StateVector::validate(double tol) const {
  if (std::abs(norm() - 1.0) > tol)
    throw Error("state vector norm drifted beyond tolerance");
}

DensityMatrix StateVector::to_density() const {
  DensityMatrix d(n_qubits_);
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      d.rho_(i, j) = amps_[i] * std::conj(amps_[j]);
  return d;
}

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  check_register_width(n_qubits);
  rho_ = CMatrix(std::size_t{1} << n_qubits, std::size_t{1} << n_qubits);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_matrix(int n_qubits, CMatrix rho) {
  DensityMatrix d(n_qubits);
  if (rho.rows() != d.dim() || rho.cols() != d.dim())
    throw DimensionMismatch("density matrix shape does not match width");
  d.rho_ = std::move(rho);
  return d;
}

double DensityMatrix::purity() const {
  return (rho_ * rho_).trace().real();
}

void DensityMatrix::validate(double trace_tol, double psd_tol) const {
  if (std::abs(rho_.trace() - cplx{1.0}) > trace_tol)
    throw Error("density matrix trace drifted beyond tolerance");
  if (rho_.hermiticity_defect() > 1e-12)
    throw Error("density matrix is not Hermitian within tolerance");
  const std::vector<double> ev = hermitian_eigenvalues(rho_);
  if (!ev.empty() && ev.front() < -psd_tol)
    throw Error("density matrix has an eigenvalue below -1e-10");
}

void CountsHistogram::validate() const {
  if (shots == 0) throw ZeroShots("histogram has zero shots");
  if (bit_labels.empty()) throw LabelMismatch("histogram has no bit labels");
  std::uint64_t total = 0;
  for (const auto& [key, n] : counts) {
    if (key.size() != bit_labels.size())
      throw LabelMismatch("counts key length does not match bit labels");
    for (char c : key)
      if (c != '0' && c != '1') throw LabelMismatch("counts key is not binary");
    total += n;
  }
  if (total != shots) throw BadDistribution("histogram counts do not sum to shots");
}

void Distribution::validate(double tol) const {
  if (labels.empty()) throw LabelMismatch("distribution has no bit labels");
  if (p.size() != (std::size_t{1} << labels.size()))
    throw DimensionMismatch("distribution length is not 2^k");
  double sum = 0.0;
  for (double v : p) {
    if (v < -1e-12) throw BadDistribution("distribution has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol)
    throw BadDistribution("distribution does not sum to one");
}

std::string outcome_string(std::uint32_t index, std::size_t n_bits) {
  std::string s(n_bits, '0');
  for (std::size_t i = 0; i < n_bits; ++i)
    if ((index >> i) & 1u) s[i] = '1';
  return s;
}

std::uint32_t outcome_index(const std::string& key) {
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '1')
      idx |= 1u << i;
    else if (key[i] != '0')
      throw LabelMismatch("outcome string is not binary");
  }
  return idx;
}

StateVector apply_unitary(const StateVector& state, const CMatrix& u,
                          const std::vector<int>& targets) {
  check_targets(targets, state.n_qubits_);
  check_gate_shape(u, targets.size());
  StateVector out = state;
  const std::size_t dim = state.dim();
  if (targets.size() == 1) {
    const std::size_t mask = std::size_t{1} << targets[0];
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & mask) continue;
      const cplx a0 = out.amps_[i], a1 = out.amps_[i | mask];
      out.amps_[i] = u(0, 0) * a0 + u(0, 1) * a1;
      out.amps_[i | mask] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  } else {
    const std::size_t m0 = std::size_t{1} << targets[0];
    const std::size_t m1 = std::size_t{1} << targets[1];
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & (m0 | m1)) continue;
      const std::size_t idx[4] = {i, i | m0, i | m1, i | m0 | m1};
      cplx v[4];
      for (int k = 0; k < 4; ++k) v[k] = out.amps_[idx[k]];
      for (int r = 0; r < 4; ++r) {
        cplx s{};
        for (int c = 0; c < 4; ++c) s += u(r, c) * v[c];
        out.amps_[idx[r]] = s;
      }
    }
  }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& state, const CMatrix& u,
                            const std::vector<int>& targets) {
  check_targets(targets, state.n_qubits_);
  check_gate_shape(u, targets.size());
  DensityMatrix out = state;
  const std::size_t dim = state.dim();
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  std::size_t masks[2] = {std::size_t{1} << targets[0], 0};
  if (k == 2) masks[1] = std::size_t{1} << targets[1];
  const std::size_t all = masks[0] | masks[1];

  auto group_index = [&](std::size_t base, std::size_t s) {
    std::size_t idx = base;
    for (std::size_t b = 0; b < k; ++b)
      if ((s >> b) & 1u) idx |= masks[b];
    return idx;
  };

  // rho <- U rho (columns fixed, rows transformed).
  for (std::size_t col = 0; col < dim; ++col) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & all) continue;
      cplx v[4];
      for (std::size_t s = 0; s < sub; ++s) v[s] = out.rho_(group_index(base, s), col);
      for (std::size_t r = 0; r < sub; ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < sub; ++c) acc += u(r, c) * v[c];
        out.rho_(group_index(base, r), col) = acc;
      }
    }
  }
  // rho <- rho U^dag (rows fixed, columns transformed with conj(U)).
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & all) continue;
      cplx v[4];
      for (std::size_t s = 0; s < sub; ++s) v[s] = out.rho_(row, group_index(base, s));
      for (std::size_t r = 0; r < sub; ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < sub; ++c) acc += std::conj(u(r, c)) * v[c];
        out.rho_(row, group_index(base, r)) = acc;
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state,
                            const std::vector<int>& keep) {
  check_measured(keep, state.n_qubits_);
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> traced;
  for (int q = 0; q < state.n_qubits_; ++q)
    if (!std::binary_search(sorted.begin(), sorted.end(), q)) traced.push_back(q);

  const int nk = static_cast<int>(sorted.size());
  DensityMatrix out(nk);
  out.rho_ = CMatrix(std::size_t{1} << nk, std::size_t{1} << nk);

  auto compose = [&](std::size_t kept_bits, std::size_t traced_bits) {
    std::size_t idx = 0;
    for (int b = 0; b < nk; ++b)
      if ((kept_bits >> b) & 1u) idx |= std::size_t{1} << sorted[b];
    for (std::size_t b = 0; b < traced.size(); ++b)
      if ((traced_bits >> b) & 1u) idx |= std::size_t{1} << traced[b];
    return idx;
  };

  const std::size_t kd = std::size_t{1} << nk;
  const std::size_t td = std::size_t{1} << traced.size();
  for (std::size_t i = 0; i < kd; ++i)
    for (std::size_t j = 0; j < kd; ++j) {
      cplx acc{};
      for (std::size_t t = 0; t < td; ++t)
        acc += state.rho_(compose(i, t), compose(j, t));
      out.rho_(i, j) = acc;
    }
  return out;
}

double born_probability(const StateVector& state,
                        const std::vector<int>& measured,
                        const std::string& outcome) {
  check_measured(measured, state.n_qubits());
  if (outcome.size() != measured.size())
    throw LabelMismatch("outcome string length does not match measured qubits");
  const std::uint32_t want = outcome_index(outcome);
  double p = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::uint32_t got = 0;
    for (std::size_t b = 0; b < measured.size(); ++b)
      got |= static_cast<std::uint32_t>((i >> measured[b]) & 1u) << b;
    if (got == want) p += std::norm(state.amp(i));
  }
  return p;
}

namespace {

template <typename Accessor>
Distribution marginal_from_diag(int n_qubits, std::size_t dim,
                                const std::vector<int>& measured,
                                std::vector<std::string> labels,
                                Accessor&& diag) {
  check_measured(measured, n_qubits);
  if (labels.empty()) labels = default_labels(measured);
  if (labels.size() != measured.size())
    throw LabelMismatch("label count does not match measured qubits");
  Distribution d;
  d.labels = std::move(labels);
  d.p.assign(std::size_t{1} << measured.size(), 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t o = 0;
    for (std::size_t b = 0; b < measured.size(); ++b)
      o |= ((i >> measured[b]) & 1u) << b;
    d.p[o] += diag(i);
  }
  // Scrub rounding noise so downstream samplers see an exact distribution.
  double sum = 0.0;
  for (double& v : d.p) {
    if (v < 0.0) {
      if (v < -1e-9) throw BadDistribution("negative probability in marginal");
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw BadDistribution("marginal does not sum to one");
  for (double& v : d.p) v /= sum;
  return d;
}

}  // namespace

Distribution marginal_distribution(const StateVector& state,
                                   const std::vector<int>& measured,
                                   std::vector<std::string> labels) {
  return marginal_from_diag(
      state.n_qubits(), state.dim(), measured, std::move(labels),
      [&](std::size_t i) { return std::norm(state.amp(i)); });
}

Distribution marginal_distribution(const DensityMatrix& state,
                                   const std::vector<int>& measured,
                                   std::vector<std::string> labels) {
  return marginal_from_diag(
      state.n_qubits(), state.dim(), measured, std::move(labels),
      [&](std::size_t i) { return state.matrix()(i, i).real(); });
}

CountsHistogram sample_counts(const Distribution& dist, std::uint64_t shots,
                              std::uint64_t seed) {
  dist.validate();
  if (shots == 0) throw ZeroShots("sampling requires at least one shot");
  std::vector<double> cdf(dist.p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    acc += dist.p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  std::vector<std::uint64_t> tallies(dist.p.size(), 0);
  std::mt19937_64 gen(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(gen);
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++tallies[std::min(idx, tallies.size() - 1)];
  }

  CountsHistogram h;
  h.bit_labels = dist.labels;
  h.shots = shots;
  for (std::size_t i = 0; i < tallies.size(); ++i)
    if (tallies[i] > 0)
      h.counts[outcome_string(static_cast<std::uint32_t>(i),
                              dist.labels.size())] = tallies[i];
  return h;
}

CountsHistogram sample_counts(const StateVector& state,
                              const std::vector<int>& measured,
                              std::uint64_t shots, std::uint64_t seed,
                              std::vector<std::string> labels) {
  return sample_counts(marginal_distribution(state, measured, std::move(labels)),
                       shots, seed);
}

Distribution to_distribution(const CountsHistogram& hist) {
  hist.validate();
  Distribution d;
  d.labels = hist.bit_labels;
  d.p.assign(std::size_t{1} << hist.bit_labels.size(), 0.0);
  for (const auto& [key, n] : hist.counts)
    d.p[outcome_index(key)] =
        static_cast<double>(n) / static_cast<double>(hist.shots);
  return d;
}

}  // namespace esd::sim
