#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "esdsim/gates.hpp"
#include "esdsim/linalg.hpp"
#include "esdsim/simcore.hpp"

namespace esd::channels {

// Amplitude damping with rate gamma over duration t, realised as a
// two-qubit exchange with a fresh partner qubit.
struct DampingParams {
  double gamma_t = 0.0;

  explicit DampingParams(double gt);

  double eta() const;    // surviving excited amplitude, exp(-gamma t / 2)
  double zeta() const;   // transferred amplitude, sqrt(1 - exp(-gamma t))
  double theta() const;  // asin(eta)
  double angle() const;  // partner rotation angle, 2 acos(eta)
};

// Exchange block: CX(system->partner), Ry(-angle/2) on partner,
// CX(system->partner), Ry(angle/2) on partner, CX(partner->system).
void append_damping(gates::Circuit& c, int system, int partner,
                    const DampingParams& p);
gates::Circuit build_damping_circuit(int n_qubits, int system, int partner,
                                     const DampingParams& p);

// 2x2 row-stochastic confusion matrix: readout[true][read].
using ReadoutMatrix = std::array<std::array<double, 2>, 2>;

ReadoutMatrix readout_from_flips(double p01, double p10);

struct NoiseModel {
  double p1 = 0.0;  // depolarizing strength after each one-qubit gate
  double p2 = 0.0;  // depolarizing strength after each two-qubit gate
  ReadoutMatrix readout{{{1.0, 0.0}, {0.0, 1.0}}};
  std::map<int, ReadoutMatrix> readout_per_qubit;  // physical overrides

  static NoiseModel defaults();  // p1=0.001, p2=0.01, flips (0.02, 0.03)

  const ReadoutMatrix& readout_for(int qubit) const;
  bool trivial_readout() const;
  void validate() const;  // BadProbability on anything outside [0, 1]
};

// rho -> (1-p) rho + p * (I/2^k (x) tr_targets rho) on the given targets.
sim::DensityMatrix apply_depolarizing(const sim::DensityMatrix& rho,
                                      const std::vector<int>& targets,
                                      double p);

// Push a measurement distribution through per-qubit confusion matrices.
// `qubits` maps label position -> physical qubit for per-qubit overrides.
sim::Distribution apply_readout_noise(const sim::Distribution& dist,
                                      const NoiseModel& noise,
                                      const std::vector<int>& qubits);

// Column-stochastic map observed <- true over the measured labels:
// matrix[obs][true].
struct CalibrationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> matrix;

  void validate() const;
};

// Exact single-shot-free calibration from the confusion matrices.
CalibrationMatrix exact_calibration(const NoiseModel& noise,
                                    const std::vector<int>& qubits,
                                    const std::vector<std::string>& labels);

// Sampled calibration: prepare every basis state, push it through the
// readout noise, sample `shots` counts, normalise each column.
CalibrationMatrix build_calibration(const NoiseModel& noise,
                                    const std::vector<int>& qubits,
                                    const std::vector<std::string>& labels,
                                    std::uint64_t shots, std::uint64_t seed);

// Non-negative least squares unfolding, renormalised to a distribution.
sim::Distribution mitigate(const sim::Distribution& observed,
                           const CalibrationMatrix& cal);

// Transpile, then evolve a density matrix with a depolarizing kick after
// every executed gate. The gate list must already be in the device basis
// when `transpiled` is true.
sim::DensityMatrix run_density(const gates::Circuit& c,
                               const NoiseModel& noise,
                               const gates::TranspileOptions& opt = {});

}  // namespace esd::channels
