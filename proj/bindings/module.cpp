#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "esdsim/channels.hpp"
#include "esdsim/entanglement.hpp"
#include "esdsim/errors.hpp"
#include "esdsim/gates.hpp"
#include "esdsim/protocol.hpp"
#include "esdsim/rng.hpp"

namespace py = pybind11;

namespace {

using Nested = std::vector<std::vector<esd::cplx>>;

Nested to_nested(const esd::CMatrix& m) {
  Nested out(m.rows(), std::vector<esd::cplx>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

esd::CMatrix from_nested(const Nested& rows) {
  const std::size_t n = rows.size();
  esd::CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw esd::DimensionMismatch("matrix rows must all have equal length");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

py::dict series_dict(const esd::protocol::ExperimentResult& res) {
  std::vector<double> gt, cs, cse, ce, cee, ps, pe;
  for (std::size_t i = 0; i < res.system.points.size(); ++i) {
    gt.push_back(res.system.points[i].gamma_t);
    cs.push_back(res.system.points[i].mean);
    cse.push_back(res.system.points[i].stderr_);
    ce.push_back(res.environment.points[i].mean);
    cee.push_back(res.environment.points[i].stderr_);
    ps.push_back(res.system.points[i].p010);
    pe.push_back(res.environment.points[i].p010);
  }
  py::dict d;
  d["gamma_t"] = gt;
  d["c_sys_mean"] = cs;
  d["c_sys_stderr"] = cse;
  d["c_env_mean"] = ce;
  d["c_env_stderr"] = cee;
  d["p010_sys"] = ps;
  d["p010_env"] = pe;
  d["mitigated"] = res.mitigated;
  d["quality_warnings"] = res.quality_warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Damped-pair concurrence protocol simulator";
  m.attr("__version__") = "0.1.0";

  py::register_exception<esd::Error>(m, "SimError");

  py::class_<esd::ent::InitialState>(m, "InitialState")
      .def_static("from_alpha", &esd::ent::InitialState::from_alpha,
                  py::arg("alpha"))
      .def_static("from_lambda", &esd::ent::InitialState::from_lambda,
                  py::arg("mixing_angle"))
      .def_property_readonly(
          "alpha", [](const esd::ent::InitialState& s) { return s.s(); })
      .def_property_readonly(
          "mixing_angle",
          [](const esd::ent::InitialState& s) { return s.lambda; });

  m.def("closed_concurrence_system", &esd::ent::closed_concurrence_system,
        py::arg("init"), py::arg("gamma_t"));
  m.def("closed_concurrence_environment",
        &esd::ent::closed_concurrence_environment, py::arg("init"),
        py::arg("gamma_t"));
  m.def("esd_time", &esd::ent::esd_time, py::arg("init"));
  m.def("esb_time", &esd::ent::esb_time, py::arg("init"));

  m.def(
      "analytic_rho_system",
      [](const esd::ent::InitialState& init, double gamma_t) {
        return to_nested(esd::ent::analytic_rho_system(init, gamma_t));
      },
      py::arg("init"), py::arg("gamma_t"));
  m.def(
      "analytic_rho_environment",
      [](const esd::ent::InitialState& init, double gamma_t) {
        return to_nested(esd::ent::analytic_rho_environment(init, gamma_t));
      },
      py::arg("init"), py::arg("gamma_t"));
  m.def(
      "concurrence_xstate",
      [](const Nested& rho) { return esd::ent::concurrence_xstate(from_nested(rho)); },
      py::arg("rho"));
  m.def(
      "witness_probability",
      [](const Nested& rho) { return esd::ent::witness_probability(from_nested(rho)); },
      py::arg("rho"));

  m.def(
      "run_series",
      [](double alpha, const std::vector<double>& grid, std::uint64_t shots,
         int repetitions, std::uint64_t seed, bool noise, bool mitigation,
         bool exact) {
        esd::protocol::ExperimentConfig cfg;
        cfg.init = esd::ent::InitialState::from_alpha(alpha);
        cfg.grid = grid;
        cfg.shots = shots;
        cfg.repetitions = repetitions;
        cfg.seed = seed;
        if (noise) cfg.noise = esd::channels::NoiseModel::defaults();
        cfg.mitigation = mitigation;
        cfg.exact = exact;
        return series_dict(esd::protocol::run_experiment(cfg));
      },
      py::arg("alpha"), py::arg("grid"), py::arg("shots") = 20000,
      py::arg("repetitions") = 10, py::arg("seed") = 0,
      py::arg("noise") = false, py::arg("mitigation") = true,
      py::arg("exact") = false);

  m.def(
      "transpile_roundtrip_ok",
      [](std::uint64_t seed, int count) {
        for (int i = 0; i < count; ++i) {
          std::mt19937_64 gen(
              esd::derive_seed(seed, {static_cast<std::uint64_t>(i)}));
          const esd::gates::Circuit c = esd::gates::random_routed_circuit(gen);
          const esd::gates::Circuit t = esd::gates::transpile_to_basis(c);
          if (!esd::gates::unitary_equal_up_to_phase(
                  esd::gates::circuit_unitary(t), esd::gates::circuit_unitary(c),
                  1e-10))
            return false;
        }
        return true;
      },
      py::arg("seed") = 1, py::arg("count") = 20);
}
