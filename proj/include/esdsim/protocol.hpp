#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esdsim/channels.hpp"
#include "esdsim/entanglement.hpp"
#include "esdsim/gates.hpp"

namespace esd::protocol {

// Role order on the five-qubit chain. The local simulation always uses
// qubits 0..4 in this order; a layout names the physical wire behind each
// role (readout error overrides and multi-set disjointness are physical).
enum Role { kEnv0 = 0, kSys0 = 1, kAncilla = 2, kSys1 = 3, kEnv1 = 4 };

struct QubitLayout {
  std::array<int, 5> physical{0, 1, 2, 3, 4};

  static QubitLayout default_wires();            // wires 0..4
  static QubitLayout consecutive(int first);     // first..first+4
  static QubitLayout descending(int first);      // first..first-4

  // Distinct, non-negative, and consecutive along a line in either direction.
  void validate() const;

  // Physical wires read out at the end: (sys0, ancilla, sys1).
  std::array<int, 3> measured() const;
  std::vector<std::string> measurement_labels() const;  // "q<wire>"

  bool overlaps(const QubitLayout& other) const;
};

enum class Target { System, Environment };

struct ExperimentConfig {
  ent::InitialState init = ent::InitialState::from_alpha(1.0 / 1.4142135623730951);
  std::vector<double> grid;  // gamma*t values, strictly increasing, >= 0
  std::uint64_t shots = 20000;
  int repetitions = 10;
  std::uint64_t seed = 0;
  std::optional<channels::NoiseModel> noise;
  bool mitigation = true;
  bool exact = false;  // use exact probabilities instead of sampling
  bool reset_aware_swap = false;
  QubitLayout layout = QubitLayout::default_wires();

  void validate() const;
};

// sqrtX RZ(lambda) sqrtX on sys0 makes sin(l/2)|0> + cos(l/2)|1>; three CX
// then copy it onto sys1 and return the ancilla to |0>.
gates::Circuit build_prep_circuit(const ent::InitialState& init);

// Prep, one damping block per system/partner pair, the swaps that move the
// partner pair into the measured slots when targeting the environment, and
// the witness stage. CX/SWAP level; transpile before executing.
gates::Circuit build_full_circuit(const ent::InitialState& init, double gamma_t,
                                  Target target);

// Append the witness: H on the ancilla, CX onto both measured neighbours,
// then the dressing that turns the ancilla readout into the Bell overlap.
void append_witness_stage(gates::Circuit& c);

// Oracle for the witness stage. `xi` holds 16 amplitudes over the non-ancilla
// qubits (0,1,3,4 in ascending order); the function embeds them with the
// ancilla in |0>, runs the witness, and compares against
//   (1/2) [ i (xi - XX xi) |0>_anc + (xi + XX xi) |1>_anc ]
// (XX flips the two measured neighbours) up to a global phase.
bool witness_stage_check(const std::vector<cplx>& xi, double tol = 1e-10);

struct SeriesPoint {
  double gamma_t = 0.0;
  double mean = 0.0;    // concurrence estimate, averaged over repetitions
  double stderr_ = 0.0; // sample deviation / sqrt(repetitions)
  double p010 = 0.0;    // mean witness-outcome probability
};

struct ConcurrenceSeries {
  Target target = Target::System;
  std::vector<SeriesPoint> points;
};

struct ExperimentResult {
  ExperimentConfig config;
  ConcurrenceSeries system;
  ConcurrenceSeries environment;
  bool mitigated = false;   // mitigation requested and noise present
  int quality_warnings = 0; // estimates flagged as beyond shot noise
};

// Full pipeline for one initial state: for every grid point and both targets,
// build the circuit, transpile, evolve (density matrix when noise is present),
// push the marginal through readout noise, then either keep the exact
// probabilities or sample `shots` counts `repetitions` times. Sampled runs
// unfold through a sampled calibration matrix when mitigation is on.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Reset check: prepare at each lambda, then report the ancilla ground-state
// population. Exact mode reports the state population under the gate noise;
// sampled mode pushes it through readout noise and draws `shots` counts.
std::vector<std::pair<double, double>> ancilla_population_diagnostic(
    const std::vector<double>& lambdas, const channels::NoiseModel& noise,
    bool exact, std::uint64_t shots, std::uint64_t seed);

// Run several configurations, refusing physically overlapping layouts.
std::vector<ExperimentResult> parallel_sets_run(
    const std::vector<ExperimentConfig>& configs);

}  // namespace esd::protocol
