#include "esdsim/gates.hpp"

#include <algorithm>
#include <cmath>

#include "esdsim/errors.hpp"
#include "esdsim/rng.hpp"

namespace esd::gates {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) throw BadTarget("gate target out of range");
}

}  // namespace

Circuit::Circuit(int n) : Circuit(n, linear_chain(n)) {}

Circuit::Circuit(int n, std::vector<std::pair<int, int>> coupling_map)
    : n_qubits(n), coupling(std::move(coupling_map)) {
  if (n < 1 || n > sim::kMaxQubits)
    throw BadTarget("circuit width must be between 1 and 5 qubits");
}

std::vector<std::pair<int, int>> Circuit::linear_chain(int n) {
  std::vector<std::pair<int, int>> c;
  for (int i = 0; i + 1 < n; ++i) c.emplace_back(i, i + 1);
  return c;
}

bool Circuit::coupled(int a, int b) const {
  for (const auto& [x, y] : coupling)
    if ((x == a && y == b) || (x == b && y == a)) return true;
  return false;
}

void Circuit::add(const Gate& g) {
  check_qubit(g.q0, n_qubits);
  if (g.two_qubit()) {
    check_qubit(g.q1, n_qubits);
    if (g.q0 == g.q1) throw BadTarget("two-qubit gate with repeated target");
    if (!coupled(g.q0, g.q1))
      throw UnroutableGate("two-qubit gate on an uncoupled pair");
  }
  ops.push_back(g);
}

CMatrix gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::ID:
      return CMatrix::identity(2);
    case GateKind::X:
      return CMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case GateKind::SQRT_X:
      return CMatrix{{0.5 * cplx{1.0, 1.0}, 0.5 * cplx{1.0, -1.0}},
                     {0.5 * cplx{1.0, -1.0}, 0.5 * cplx{1.0, 1.0}}};
    case GateKind::RZ: {
      const cplx e = std::polar(1.0, -0.5 * g.param);
      return CMatrix{{e, 0.0}, {0.0, std::conj(e)}};
    }
    case GateKind::CX:
      // (control, target) = (low bit, high bit).
      return CMatrix{{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}};
    case GateKind::ECR: {
      const CMatrix x{{0.0, 1.0}, {1.0, 0.0}};
      const CMatrix y{{0.0, -kI}, {kI, 0.0}};
      const CMatrix id = CMatrix::identity(2);
      // First kron factor = high bit = second listed target.
      return (kron(x, id) - kron(y, x)) * cplx{1.0 / std::sqrt(2.0), 0.0};
    }
    case GateKind::SWAP:
      return CMatrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  }
  throw Error("unknown gate kind");
}

CMatrix ry_equivalent(double lambda) {
  const CMatrix sx = gate_matrix(Gate::sqrt_x(0));
  return sx * gate_matrix(Gate::rz(0, lambda)) * sx;
}

CMatrix circuit_unitary(const Circuit& c) {
  CMatrix u = CMatrix::identity(std::size_t{1} << c.n_qubits);
  for (const Gate& g : c.ops)
    u = embed_unitary(gate_matrix(g), g.targets(), c.n_qubits) * u;
  return u;
}

sim::StateVector run_statevector(const Circuit& c, sim::StateVector state) {
  if (state.n_qubits() != c.n_qubits)
    throw DimensionMismatch("state width does not match circuit width");
  for (const Gate& g : c.ops)
    state = sim::apply_unitary(state, gate_matrix(g), g.targets());
  return state;
}

sim::StateVector run_statevector(const Circuit& c) {
  return run_statevector(c, sim::StateVector(c.n_qubits));
}

namespace {

// Stored CX->ECR dressing. CX(c->t) equals, up to a global phase,
//   RZ(-pi/2)(c) X(c) [RZ(pi) sqrtX RZ(pi)](t)  after  ECR(t, c);
// the right-hand side below is emitted in execution order.
void append_cx_as_ecr(Circuit& out, int control, int target, bool corrupt) {
  out.add(Gate::ecr(target, control));
  out.add(Gate::x(control));
  out.add(Gate::rz(control, (corrupt ? 1.0 : -1.0) * kPi / 2.0));
  out.add(Gate::rz(target, kPi));
  out.add(Gate::sqrt_x(target));
  out.add(Gate::rz(target, kPi));
}

}  // namespace

Circuit transpile_to_basis(const Circuit& c, const TranspileOptions& opt) {
  Circuit out(c.n_qubits, c.coupling);
  for (const Gate& g : c.ops) {
    switch (g.kind) {
      case GateKind::ID:
      case GateKind::X:
      case GateKind::SQRT_X:
      case GateKind::RZ:
      case GateKind::ECR:
        out.add(g);
        break;
      case GateKind::CX:
        append_cx_as_ecr(out, g.q0, g.q1, opt.corrupt_dressing);
        break;
      case GateKind::SWAP:
        if (opt.reset_aware_swap) {
          // Exact only when g.q1 starts in |0>; see TranspileOptions.
          append_cx_as_ecr(out, g.q0, g.q1, opt.corrupt_dressing);
          append_cx_as_ecr(out, g.q1, g.q0, opt.corrupt_dressing);
        } else {
          append_cx_as_ecr(out, g.q0, g.q1, opt.corrupt_dressing);
          append_cx_as_ecr(out, g.q1, g.q0, opt.corrupt_dressing);
          append_cx_as_ecr(out, g.q0, g.q1, opt.corrupt_dressing);
        }
        break;
    }
  }
  return out;
}

bool unitary_equal_up_to_phase(const CMatrix& u, const CMatrix& v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
  cplx phase{1.0, 0.0};
  bool found = false;
  for (std::size_t i = 0; i < v.rows() && !found; ++i)
    for (std::size_t j = 0; j < v.cols() && !found; ++j)
      if (std::abs(v(i, j)) > 1e-8) {
        phase = u(i, j) / v(i, j);
        const double m = std::abs(phase);
        if (m == 0.0) return false;
        phase /= m;
        found = true;
      }
  if (!found) return false;
  double err = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j)
      err = std::max(err, std::abs(u(i, j) - phase * v(i, j)));
  return err <= tol;
}

LocalInvariants local_equivalence_invariants(const CMatrix& u4) {
  if (u4.rows() != 4 || u4.cols() != 4)
    throw DimensionMismatch("local invariants need a 4x4 matrix");
  if (u4.unitarity_defect() > 1e-10)
    throw NonUnitary("local invariants need a unitary matrix");
  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix q{{r, 0, 0, r * kI},
                  {0, r * kI, r, 0},
                  {0, r * kI, -r, 0},
                  {r, 0, 0, -r * kI}};
  const CMatrix ub = q.dagger() * u4 * q;
  const CMatrix m = ub.transpose() * ub;
  const cplx t = m.trace();
  const cplx t2 = (m * m).trace();
  const cplx d = determinant(u4);
  const cplx g1 = t * t / (16.0 * d);
  const cplx g2 = (t * t - t2) / (4.0 * d);
  return {g1, g2.real()};
}

bool invariants_equal(const LocalInvariants& a, const LocalInvariants& b,
                      double tol) {
  return std::abs(a.g1 - b.g1) <= tol && std::abs(a.g2 - b.g2) <= tol;
}

void append_ry(Circuit& c, int q, double theta) {
  c.add(Gate::sqrt_x(q));
  c.add(Gate::rz(q, theta));
  c.add(Gate::sqrt_x(q));
  c.add(Gate::x(q));
}

void append_hadamard(Circuit& c, int q) { append_ry_equivalent(c, q, kPi / 2.0); }

void append_ry_equivalent(Circuit& c, int q, double lambda) {
  c.add(Gate::sqrt_x(q));
  c.add(Gate::rz(q, lambda));
  c.add(Gate::sqrt_x(q));
}

Circuit random_routed_circuit(std::mt19937_64& gen, int max_gates) {
  const int n = 2 + static_cast<int>(gen() % 4);  // 2..5 qubits
  Circuit c(n);
  const int count = 1 + static_cast<int>(gen() % static_cast<unsigned>(max_gates));
  for (int i = 0; i < count; ++i) {
    const int q = static_cast<int>(gen() % static_cast<unsigned>(n));
    const int pair_lo = n > 1 ? static_cast<int>(gen() % static_cast<unsigned>(n - 1)) : 0;
    const bool flip = (gen() & 1u) != 0;
    switch (gen() % 6) {
      case 0:
        c.add(Gate::id(q));
        break;
      case 1:
        c.add(Gate::x(q));
        break;
      case 2:
        c.add(Gate::sqrt_x(q));
        break;
      case 3:
        c.add(Gate::rz(q, uniform01(gen) * 2.0 * kPi));
        break;
      case 4:
        c.add(flip ? Gate::cx(pair_lo + 1, pair_lo) : Gate::cx(pair_lo, pair_lo + 1));
        break;
      case 5:
        c.add(flip ? Gate::swap(pair_lo + 1, pair_lo) : Gate::swap(pair_lo, pair_lo + 1));
        break;
    }
  }
  return c;
}

}  // namespace esd::gates
