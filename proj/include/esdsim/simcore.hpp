#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "esdsim/linalg.hpp"

namespace esd::sim {

// Bit order convention used everywhere in this library: qubit 0 is the least
// significant bit of a basis-state index, so bit i of index k is the value of
// qubit i in |k>. Outcome strings are written first-measured-qubit-leftmost.

inline constexpr int kMaxQubits = 5;

class DensityMatrix;

class StateVector {
 public:
  // |0...0> on n qubits.
  explicit StateVector(int n_qubits);
  static StateVector basis_state(int n_qubits, std::uint32_t index);
  static StateVector from_amplitudes(int n_qubits, std::vector<cplx> amps);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const cplx& amp(std::size_t i) const { return amps_[i]; }
  const std::vector<cplx>& amplitudes() const { return amps_; }

  double norm() const;
  // Throws esd::Error if the norm has drifted beyond tol from 1.
  void validate(double tol = 1e-12) const;

  DensityMatrix to_density() const;

  friend StateVector apply_unitary(const StateVector& state, const CMatrix& u,
                                   const std::vector<int>& targets);

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(int n_qubits);
  static DensityMatrix from_matrix(int n_qubits, CMatrix rho);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return rho_.rows(); }
  const CMatrix& matrix() const { return rho_; }

  double purity() const;
  // Trace within 1e-12 of one, Hermitian within 1e-12, eigenvalues >= -1e-10.
  void validate(double trace_tol = 1e-12, double psd_tol = 1e-10) const;

  friend DensityMatrix apply_unitary(const DensityMatrix& state,
                                     const CMatrix& u,
                                     const std::vector<int>& targets);
  friend DensityMatrix partial_trace(const DensityMatrix& state,
                                     const std::vector<int>& keep);
  friend class StateVector;

 private:
  int n_qubits_;
  CMatrix rho_;
};

// Measurement outcomes over k qubits. `bit_labels[i]` names the qubit whose
// value is character i (leftmost = first measured) of every counts key; the
// same position is bit i (LSB first) of the integer outcome index.
struct CountsHistogram {
  std::vector<std::string> bit_labels;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;

  void validate() const;
};

// A probability vector over the 2^labels.size() outcomes, indexed like the
// integer outcome index described above.
struct Distribution {
  std::vector<std::string> labels;
  std::vector<double> p;

  void validate(double tol = 1e-9) const;
};

std::string outcome_string(std::uint32_t index, std::size_t n_bits);
std::uint32_t outcome_index(const std::string& key);

// Apply a 2x2 or 4x4 unitary; targets[0] is the low bit of the small matrix.
// Throws NonUnitary (defect > 1e-12), BadTarget, DimensionMismatch.
StateVector apply_unitary(const StateVector& state, const CMatrix& u,
                          const std::vector<int>& targets);
DensityMatrix apply_unitary(const DensityMatrix& state, const CMatrix& u,
                            const std::vector<int>& targets);

// Reduced state on `keep`; result qubit r is the r-th smallest kept index.
DensityMatrix partial_trace(const DensityMatrix& state,
                            const std::vector<int>& keep);

// Probability of reading `outcome` (first measured qubit = leftmost char)
// on the listed qubits.
double born_probability(const StateVector& state,
                        const std::vector<int>& measured,
                        const std::string& outcome);

// Full Born marginal over the measured qubits, in outcome-index order.
// Labels default to "q<i>" for measured qubit i.
Distribution marginal_distribution(const StateVector& state,
                                   const std::vector<int>& measured,
                                   std::vector<std::string> labels = {});
Distribution marginal_distribution(const DensityMatrix& state,
                                   const std::vector<int>& measured,
                                   std::vector<std::string> labels = {});

// Draw `shots` outcomes from the marginal; deterministic for a fixed seed.
CountsHistogram sample_counts(const StateVector& state,
                              const std::vector<int>& measured,
                              std::uint64_t shots, std::uint64_t seed,
                              std::vector<std::string> labels = {});
CountsHistogram sample_counts(const Distribution& dist, std::uint64_t shots,
                              std::uint64_t seed);

// Empirical frequencies of a histogram as a Distribution.
Distribution to_distribution(const CountsHistogram& hist);

}  // namespace esd::sim
