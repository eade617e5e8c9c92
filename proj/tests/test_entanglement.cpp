// Closed-form pair states, concurrence, critical times, and the estimator.
//
// Two independent oracles anchor this file:
//  * a four-qubit purification of the damped pair, reduced by partial trace,
//    must reproduce the closed-form two-qubit states;
//  * the generic spectral concurrence (time-reversed overlap eigenvalues)
//    must agree with the X-form shortcut.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "esdsim/entanglement.hpp"
#include "esdsim/errors.hpp"
#include "esdsim/simcore.hpp"

using namespace esd;
using namespace esd::ent;
namespace s = esd::sim;

namespace {

const std::vector<double> kAlphas = {1.0 / std::sqrt(5.0), 1.0 / std::sqrt(3.0),
                                     1.0 / std::sqrt(2.0)};
const std::vector<double> kTimes = {0.0, 0.1, 0.35, 0.6931471805599453, 1.2,
                                    2.5};

// Pure four-qubit dilation of the damped pair. Qubit roles by bit index:
// 0 = partner of the first half, 1 = first half, 2 = second half,
// 3 = partner of the second half. Each excited half independently evolves
// |1>|0> -> eta |1>|0> + zeta |0>|1> against its own fresh partner.
s::StateVector purified_state(const InitialState& init, double gamma_t) {
  const double eta = std::exp(-0.5 * gamma_t);
  const double zeta = std::sqrt(1.0 - std::exp(-gamma_t));
  std::vector<cplx> amps(16, cplx{});
  amps[0] = init.s();                       // |0000>
  amps[6] = init.c() * eta * eta;           // both halves still excited
  amps[10] = init.c() * eta * zeta;         // second half decayed into bit 3
  amps[5] = init.c() * zeta * eta;          // first half decayed into bit 0
  amps[9] = init.c() * zeta * zeta;         // both decayed
  return s::StateVector::from_amplitudes(4, std::move(amps));
}

CMatrix conj_matrix(const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = std::conj(m(i, j));
  return out;
}

CMatrix psd_sqrt(const CMatrix& m) {
  std::vector<double> vals;
  CMatrix v(1, 1);
  hermitian_eigensystem(m, vals, v);
  CMatrix d(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    d(i, i) = std::sqrt(std::max(0.0, vals[i]));
  return v * d * v.dagger();
}

// Generic two-qubit concurrence from the spectrum of sqrt(rho) rho~ sqrt(rho),
// where rho~ is the spin-flipped complex conjugate. No X-form assumption.
double spectral_concurrence(const CMatrix& rho) {
  const cplx i{0.0, 1.0};
  const CMatrix y{{0.0, -i}, {i, 0.0}};
  const CMatrix yy = kron(y, y);
  const CMatrix tilde = yy * conj_matrix(rho) * yy;
  const CMatrix root = psd_sqrt(rho);
  const std::vector<double> mu = hermitian_eigenvalues(root * tilde * root);
  double acc = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double r = std::sqrt(std::max(0.0, mu[k]));
    acc += (k + 1 == mu.size()) ? r : -r;
  }
  return std::max(0.0, acc);
}

CMatrix bell_rho() {
  CMatrix rho(4, 4);
  rho(0, 0) = 0.5;
  rho(3, 3) = 0.5;
  rho(0, 3) = 0.5;
  rho(3, 0) = 0.5;
  return rho;
}

double bisect(double lo, double hi, double (*f)(const InitialState&, double),
              const InitialState& init) {
  auto h = [&](double t) { return 2.0 * f(init, t) - 1.0; };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((h(lo) <= 0.0) == (h(mid) <= 0.0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("initial state parameterisation") {
  InitialState half = InitialState::from_alpha(0.5);
  CHECK(half.s() == doctest::Approx(0.5));
  CHECK(half.s() * half.s() + half.c() * half.c() == doctest::Approx(1.0));
  CHECK(InitialState::from_lambda(half.lambda).c() == doctest::Approx(half.c()));

  CHECK_THROWS_AS(InitialState::from_alpha(0.0), ConfigError);
  CHECK_THROWS_AS(InitialState::from_alpha(1.0), ConfigError);
  CHECK_THROWS_AS(InitialState::from_alpha(-0.3), ConfigError);
  CHECK_THROWS_AS(InitialState::from_lambda(0.0), ConfigError);
  CHECK_THROWS_AS(InitialState::from_lambda(3.15), ConfigError);
}

TEST_CASE("purification oracle: partial traces reproduce both pair states") {
  for (double alpha : kAlphas) {
    const InitialState init = InitialState::from_alpha(alpha);
    for (double t : kTimes) {
      const s::DensityMatrix full = purified_state(init, t).to_density();
      const CMatrix sys = s::partial_trace(full, {1, 2}).matrix();
      const CMatrix env = s::partial_trace(full, {0, 3}).matrix();
      CHECK(max_abs_diff(sys, analytic_rho_system(init, t)) < 1e-12);
      CHECK(max_abs_diff(env, analytic_rho_environment(init, t)) < 1e-12);
    }
  }
}

TEST_CASE("analytic state frozen at the balanced point, one half-life") {
  const InitialState init = InitialState::from_alpha(1.0 / std::sqrt(2.0));
  const double ln2 = std::log(2.0);
  const CMatrix rho = analytic_rho_system(init, ln2);
  CHECK(std::abs(rho(0, 0) - 0.625) < 1e-12);
  CHECK(std::abs(rho(1, 1) - 0.125) < 1e-12);
  CHECK(std::abs(rho(2, 2) - 0.125) < 1e-12);
  CHECK(std::abs(rho(3, 3) - 0.125) < 1e-12);
  CHECK(std::abs(rho(0, 3) - 0.25) < 1e-12);
  CHECK(witness_probability(rho) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK_NOTHROW(check_x_form(rho));
  CHECK_THROWS_AS(analytic_rho_system(init, -0.5), NegativeTime);
  CHECK_THROWS_AS(analytic_rho_environment(init, -0.5), NegativeTime);
}

TEST_CASE("spectral oracle agrees with the X-form concurrence") {
  for (double alpha : kAlphas) {
    const InitialState init = InitialState::from_alpha(alpha);
    for (double t : kTimes) {
      const CMatrix sys = analytic_rho_system(init, t);
      const CMatrix env = analytic_rho_environment(init, t);
      CHECK(std::abs(spectral_concurrence(sys) - concurrence_xstate(sys)) <
            1e-9);
      CHECK(std::abs(spectral_concurrence(env) - concurrence_xstate(env)) <
            1e-9);
    }
  }
  CHECK(spectral_concurrence(bell_rho()) == doctest::Approx(1.0));
  CMatrix product(4, 4);
  product(0, 0) = 1.0;
  CHECK(spectral_concurrence(product) == doctest::Approx(0.0));
  CHECK(concurrence_xstate(CMatrix::identity(4) * cplx{0.25, 0.0}) ==
        doctest::Approx(0.0));
}

TEST_CASE("frozen initial concurrences") {
  CHECK(closed_concurrence_system(InitialState::from_alpha(1.0 / std::sqrt(5.0)),
                                  0.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(closed_concurrence_system(InitialState::from_alpha(1.0 / std::sqrt(3.0)),
                                  0.0) ==
        doctest::Approx(0.9428090415820634).epsilon(1e-12));
  CHECK(closed_concurrence_system(InitialState::from_alpha(1.0 / std::sqrt(2.0)),
                                  0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed forms match the analytic density matrices everywhere") {
  for (double alpha : kAlphas) {
    const InitialState init = InitialState::from_alpha(alpha);
    for (int i = 0; i < 64; ++i) {
      const double t = 3.0 * static_cast<double>(i) / 63.0;
      const CMatrix sys = analytic_rho_system(init, t);
      const CMatrix env = analytic_rho_environment(init, t);
      CHECK(std::abs(closed_p_phi_system(init, t) - witness_probability(sys)) <
            1e-14);
      CHECK(std::abs(closed_p_phi_environment(init, t) -
                     witness_probability(env)) < 1e-14);
      CHECK(std::abs(closed_concurrence_system(init, t) -
                     concurrence_xstate(sys)) < 1e-12);
      CHECK(std::abs(closed_concurrence_environment(init, t) -
                     concurrence_xstate(env)) < 1e-12);
    }
  }
}

TEST_CASE("critical times: frozen values and bisection cross-check") {
  const InitialState third = InitialState::from_alpha(1.0 / std::sqrt(3.0));
  const InitialState fifth = InitialState::from_alpha(1.0 / std::sqrt(5.0));
  const InitialState balanced = InitialState::from_alpha(1.0 / std::sqrt(2.0));

  REQUIRE(esd_time(fifth).has_value());
  CHECK(*esd_time(fifth) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(*esb_time(fifth) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  REQUIRE(esd_time(third).has_value());
  CHECK(*esd_time(third) == doctest::Approx(1.2279471772995159).epsilon(1e-12));
  CHECK(*esb_time(third) ==
        doctest::Approx(0.3465735902799726).epsilon(1e-12));
  CHECK(*esb_time(third) < *esd_time(third));  // birth precedes death here

  CHECK(!esd_time(balanced).has_value());
  CHECK(!esb_time(balanced).has_value());
  CHECK(!esd_time(InitialState::from_lambda(2.0)).has_value());

  // Root-find the witness crossings directly from the closed forms.
  for (const InitialState& init : {third, fifth}) {
    const double death = bisect(0.0, 50.0, closed_p_phi_system, init);
    const double birth = bisect(50.0, 1e-6, closed_p_phi_environment, init);
    CHECK(std::abs(death - *esd_time(init)) < 1e-9);
    CHECK(std::abs(birth - *esb_time(init)) < 1e-9);
  }
}

TEST_CASE("X-form checker rejects everything that is not an X state") {
  CHECK_THROWS_AS(check_x_form(CMatrix::identity(2)), NotXForm);

  CMatrix off = bell_rho();
  off(0, 1) = 0.2;
  off(1, 0) = 0.2;
  CHECK_THROWS_AS(check_x_form(off), NotXForm);

  CMatrix non_herm = bell_rho();
  non_herm(0, 3) = cplx{0.5, 0.2};
  CHECK_THROWS_AS(check_x_form(non_herm), NotXForm);

  CMatrix traceless = bell_rho() * cplx{0.5, 0.0};
  CHECK_THROWS_AS(check_x_form(traceless), NotXForm);

  CMatrix negative(4, 4);  // corner exceeds the geometric mean of the diagonal
  negative(0, 0) = 0.5;
  negative(3, 3) = 0.5;
  negative(0, 3) = 0.6;
  negative(3, 0) = 0.6;
  CHECK_THROWS_AS(check_x_form(negative), NotXForm);

  CHECK_NOTHROW(check_x_form(bell_rho()));
}

TEST_CASE("witness estimate from counts: frozen arithmetic and the warning") {
  s::CountsHistogram hist;
  hist.bit_labels = {"q1", "q2", "q3"};
  hist.counts = {{"010", 11000}, {"000", 9000}};
  hist.shots = 20000;
  ConcurrenceEstimate est = concurrence_from_counts(hist);
  CHECK(est.p010 == doctest::Approx(0.55));
  CHECK(est.raw == doctest::Approx(1.2));
  CHECK(est.value == doctest::Approx(1.0));  // clipped
  CHECK(est.quality_warning);                // 0.2 above 1 is far beyond noise

  hist.counts = {{"010", 5000}, {"111", 15000}};
  est = concurrence_from_counts(hist);
  CHECK(est.raw == doctest::Approx(0.0));
  CHECK(est.value == doctest::Approx(0.0));
  CHECK(!est.quality_warning);

  hist.counts = {{"000", 17000}, {"010", 3000}};
  est = concurrence_from_counts(hist);
  CHECK(est.raw == doctest::Approx(-0.4));
  CHECK(est.value == doctest::Approx(0.0));  // clipped from below
  CHECK(!est.quality_warning);

  s::CountsHistogram wrong;
  wrong.bit_labels = {"q0", "q1"};
  wrong.counts = {{"01", 10}};
  wrong.shots = 10;
  CHECK_THROWS_AS(concurrence_from_counts(wrong), DimensionMismatch);
}

TEST_CASE("witness estimate from distributions") {
  s::Distribution d{{"a", "b", "c"}, {0.1, 0.0, 0.6, 0.0, 0.1, 0.0, 0.2, 0.0}};
  ConcurrenceEstimate exact = concurrence_from_distribution(d);
  CHECK(exact.p010 == doctest::Approx(0.6));
  CHECK(exact.raw == doctest::Approx(1.4));
  CHECK(exact.value == doctest::Approx(1.0));
  // Exact probabilities carry no shot noise, so any excess over 1 is flagged.
  CHECK(exact.quality_warning);

  // At 100 shots the binomial band is wide: 1.4 < 1 + 12 * 0.049.
  ConcurrenceEstimate sampled = concurrence_from_distribution(d, 100);
  CHECK(sampled.p010 == doctest::Approx(0.6));
  CHECK(!sampled.quality_warning);
  // At 20000 shots the same excess is clearly beyond shot noise.
  CHECK(concurrence_from_distribution(d, 20000).quality_warning);

  CHECK_THROWS_AS(concurrence_from_distribution(d, 0), ZeroShots);
  s::Distribution two{{"a", "b"}, {0.5, 0.5, 0.0, 0.0}};
  CHECK_THROWS_AS(concurrence_from_distribution(two), DimensionMismatch);
}
