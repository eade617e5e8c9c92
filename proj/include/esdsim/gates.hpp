#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "esdsim/linalg.hpp"
#include "esdsim/simcore.hpp"

namespace esd::gates {

enum class GateKind { ID, X, SQRT_X, RZ, CX, ECR, SWAP };

// One circuit operation. Two-qubit conventions:
//  - targets() lists {low, high}: the first target is the least significant
//    index bit of the 4x4 matrix.
//  - CX lists (control, target): control is the low bit.
//  - ECR is (1/sqrt(2)) (X (x) I - Y (x) X) with the first kron factor acting
//    on the SECOND listed qubit (the high bit).
struct Gate {
  GateKind kind = GateKind::ID;
  int q0 = 0;
  int q1 = -1;  // unused for single-qubit gates
  double param = 0.0;  // RZ rotation angle

  static Gate id(int q) { return {GateKind::ID, q}; }
  static Gate x(int q) { return {GateKind::X, q}; }
  static Gate sqrt_x(int q) { return {GateKind::SQRT_X, q}; }
  static Gate rz(int q, double lambda) { return {GateKind::RZ, q, -1, lambda}; }
  static Gate cx(int control, int target) {
    return {GateKind::CX, control, target};
  }
  static Gate ecr(int a, int b) { return {GateKind::ECR, a, b}; }
  static Gate swap(int a, int b) { return {GateKind::SWAP, a, b}; }

  bool two_qubit() const {
    return kind == GateKind::CX || kind == GateKind::ECR ||
           kind == GateKind::SWAP;
  }
  std::vector<int> targets() const {
    return two_qubit() ? std::vector<int>{q0, q1} : std::vector<int>{q0};
  }
};

// A gate list over an n-qubit register with an undirected coupling map.
// Adding a two-qubit gate on a pair outside the map throws UnroutableGate.
struct Circuit {
  int n_qubits = 0;
  std::vector<std::pair<int, int>> coupling;
  std::vector<Gate> ops;

  explicit Circuit(int n);
  Circuit(int n, std::vector<std::pair<int, int>> coupling_map);

  static std::vector<std::pair<int, int>> linear_chain(int n);

  void add(const Gate& g);
  bool coupled(int a, int b) const;
};

// The 2x2 or 4x4 unitary of a single gate.
CMatrix gate_matrix(const Gate& g);

// The literal triple product sqrtX * RZ(lambda) * sqrtX, which works out to
// [[sin(l/2), cos(l/2)], [cos(l/2), -sin(l/2)]] with no residual phase.
CMatrix ry_equivalent(double lambda);

// Full 2^n x 2^n unitary of a circuit (register is at most five qubits).
CMatrix circuit_unitary(const Circuit& c);

// Run a circuit on |0...0> (or a caller-supplied state).
sim::StateVector run_statevector(const Circuit& c);
sim::StateVector run_statevector(const Circuit& c, sim::StateVector state);

struct TranspileOptions {
  // Expand SWAP as two CX instead of three. Exact only when the second listed
  // qubit of the SWAP starts in |0> (the state of the first qubit then moves
  // onto the second and the first is left in |0>).
  bool reset_aware_swap = false;
  // Test hook: corrupt the stored CX->ECR dressing so equivalence checking
  // must fail. Used by the transpile-check command's negative control.
  bool corrupt_dressing = false;
};

// Rewrite {ID, X, SQRT_X, RZ, CX, SWAP} onto {ID, X, SQRT_X, RZ, ECR}.
// SWAP expands to CX first; each CX becomes one ECR plus fixed single-qubit
// layers (the dressing rule is stored, see transpile tests).
Circuit transpile_to_basis(const Circuit& c, const TranspileOptions& opt = {});

// True when u = e^{i phi} v for some phase; phi is fixed by the first entry of
// v with magnitude above 1e-8, then max |u - e^{i phi} v| <= tol is required.
bool unitary_equal_up_to_phase(const CMatrix& u, const CMatrix& v,
                               double tol = 1e-10);

// Two-qubit local invariants (magic-basis construction). Gates differing only
// by single-qubit rotations share these values; CX-like gates give (0, 1),
// SWAP gives (-1, -3), identity gives (1, 3).
struct LocalInvariants {
  cplx g1;
  double g2;
};
LocalInvariants local_equivalence_invariants(const CMatrix& u4);
bool invariants_equal(const LocalInvariants& a, const LocalInvariants& b,
                      double tol = 1e-9);

// Append sqrtX RZ(theta) sqrtX X, which equals Ry(theta) exactly.
void append_ry(Circuit& c, int q, double theta);
// Append sqrtX RZ(pi/2) sqrtX, the Hadamard.
void append_hadamard(Circuit& c, int q);
// Append sqrtX RZ(lambda) sqrtX (the ry_equivalent matrix).
void append_ry_equivalent(Circuit& c, int q, double lambda);

// Seeded random circuit on a linear chain: 2..5 qubits, 1..max_gates gates
// drawn from {ID, X, SQRT_X, RZ, CX, SWAP} on random (adjacent) targets.
Circuit random_routed_circuit(std::mt19937_64& gen, int max_gates = 20);

}  // namespace esd::gates
