#pragma once

#include <optional>

#include "esdsim/linalg.hpp"
#include "esdsim/simcore.hpp"

namespace esd::ent {

// The partially entangled pair sin(lambda/2)|00> + cos(lambda/2)|11>.
// Both qubits later damp at the same rate, so the state stays in X form.
struct InitialState {
  double lambda = 0.0;  // mixing angle, must lie in (0, pi)

  static InitialState from_lambda(double lambda);
  // alpha = sin(lambda/2), the |00> amplitude; alpha must lie in (0, 1).
  static InitialState from_alpha(double alpha);

  double s() const;  // sin(lambda/2)
  double c() const;  // cos(lambda/2)
};

// Two-qubit reduced states after both halves damp for a duration gamma_t,
// with eta = exp(-gamma_t/2), zeta = sqrt(1 - exp(-gamma_t)):
//   system pair:      diag(s^2 + c^2 zeta^4, c^2 eta^2 zeta^2,
//                          c^2 eta^2 zeta^2, c^2 eta^4), corners s c eta^2;
//   environment pair: the same with eta and zeta exchanged.
CMatrix analytic_rho_system(const InitialState& init, double gamma_t);
CMatrix analytic_rho_environment(const InitialState& init, double gamma_t);

// Throws NotXForm unless rho is a valid two-qubit X-form density matrix:
// Hermitian, unit trace, PSD, and zero (within tol) outside the diagonal
// and anti-diagonal.
void check_x_form(const CMatrix& rho, double tol = 1e-10);

// Wootters concurrence, specialised to X form:
// 2 max(0, |rho03| - sqrt(rho11 rho22), |rho12| - sqrt(rho00 rho33)).
double concurrence_xstate(const CMatrix& rho);

// Overlap with the Bell state (|00> + |11>)/sqrt(2):
// (rho00 + rho33)/2 + Re rho03. For the states above the concurrence equals
// max(0, 2 * overlap - 1).
double witness_probability(const CMatrix& rho);

// Closed forms for the damped pair states.
double closed_p_phi_system(const InitialState& init, double gamma_t);
double closed_p_phi_environment(const InitialState& init, double gamma_t);
double closed_concurrence_system(const InitialState& init, double gamma_t);
double closed_concurrence_environment(const InitialState& init, double gamma_t);

// Interior critical times (in gamma*t units). Both exist only when
// s < c: the system pair dies at -ln(1 - s/c), the environment pair is
// born at -ln(s/c). For s >= c the system never dies and the environment
// is entangled from t = 0+, so both return nullopt.
std::optional<double> esd_time(const InitialState& init);
std::optional<double> esb_time(const InitialState& init);

// Witness-based estimate: raw = 4 * P(outcome "010") - 1, clipped to [0, 1].
// quality_warning flags a raw value more than three binomial standard
// deviations above 1, which indicates a miscalibrated pipeline rather than
// shot noise.
struct ConcurrenceEstimate {
  double value = 0.0;
  double raw = 0.0;
  double p010 = 0.0;
  bool quality_warning = false;
};

ConcurrenceEstimate concurrence_from_counts(const sim::CountsHistogram& hist);
ConcurrenceEstimate concurrence_from_distribution(const sim::Distribution& dist);
// For a distribution that came out of `shots` samples (possibly unfolded
// afterwards, so the integer counts are gone): same estimate, with the
// warning threshold using the binomial deviation for that shot count.
ConcurrenceEstimate concurrence_from_distribution(const sim::Distribution& dist,
                                                  std::uint64_t shots);

}  // namespace esd::ent
