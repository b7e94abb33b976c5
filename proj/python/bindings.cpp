#include "ephydro/config.hpp"
#include "ephydro/diagnostics.hpp"
#include "ephydro/doping.hpp"
#include "ephydro/errors.hpp"
#include "ephydro/gas_model.hpp"
#include "ephydro/poisson.hpp"
#include "ephydro/stationary.hpp"
#include "ephydro/viscous_solver.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ephydro;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw ShapeError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

FluxScheme flux_from(const std::string& s) {
  if (s == "central") return FluxScheme::central;
  if (s == "rusanov") return FluxScheme::rusanov;
  throw py::value_error("scheme must be 'central' or 'rusanov'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Viscous Euler-Poisson core";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<BracketError>(m, "BracketError", PyExc_RuntimeError);
  py::register_exception<BlowupError>(m, "BlowupError", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<GasModel>(m, "GasModel")
      .def(py::init(&GasModel::from_gamma), "gamma"_a)
      .def_readonly("gamma", &GasModel::gamma)
      .def_readonly("theta", &GasModel::theta)
      .def_readonly("p0", &GasModel::p0)
      .def_readonly("lam", &GasModel::lam)
      .def("__repr__", [](const GasModel& g) { return "GasModel(gamma=" + std::to_string(g.gamma) + ")"; });

  m.def("pressure", &pressure, "model"_a, "n"_a);
  m.def(
      "to_invariants",
      [](const GasModel& g, double n, double J) {
        const auto r = to_invariants(g, {n, J});
        return py::make_tuple(r.w, r.z);
      },
      "model"_a, "n"_a, "J"_a);
  m.def(
      "from_invariants",
      [](const GasModel& g, double w, double z) {
        const auto p = from_invariants(g, {w, z});
        return py::make_tuple(p.n, p.J);
      },
      "model"_a, "w"_a, "z"_a);
  m.def(
      "mechanical_energy",
      [](const GasModel& g, double n, double J) {
        const auto v = mechanical_energy(g, {n, J});
        return py::make_tuple(v.eta, v.q, v.eta_J);
      },
      "model"_a, "n"_a, "J"_a);
  m.def(
      "weak_entropy_pair",
      [](const GasModel& g, int power, double n, double J) {
        const auto v = weak_entropy_pair(g, monomial_generator(power), {n, J});
        return py::make_tuple(v.eta, v.q, v.eta_J);
      },
      "model"_a, "power"_a, "n"_a, "J"_a, "Pair generated by g(xi) = xi**power.");
  m.def(
      "relative_entropy", [](const GasModel& g, double n, double J, double N) { return relative_entropy(g, {n, J}, N); },
      "model"_a, "n"_a, "J"_a, "N_tilde"_a);

  py::class_<DopingProfile>(m, "DopingProfile")
      .def(py::init([](const std::string& spec) { return DopingProfile::parse(spec); }), "spec"_a)
      .def("__call__", &DopingProfile::operator(), "x"_a)
      .def_property_readonly("lower", &DopingProfile::lower)
      .def_property_readonly("upper", &DopingProfile::upper)
      .def("sample", [](const DopingProfile& d, std::size_t cells) { return to_array(d.sample(Grid(cells))); })
      .def("__repr__", &DopingProfile::describe);

  m.def(
      "project_neutral",
      [](const Array& n0, const DopingProfile& d) {
        const auto v = to_vector(n0);
        return to_array(project_neutral(v, d, 1.0 / static_cast<double>(v.size() - 1)).n);
      },
      "n0"_a, "doping"_a);
  m.def(
      "mollify_initial",
      [](const Array& n0, const Array& J0, double eps) {
        const auto n = to_vector(n0), J = to_vector(J0);
        const auto out = mollify_initial(n, J, eps, 1.0 / static_cast<double>(n.size() - 1));
        return py::make_tuple(to_array(out.n), to_array(out.J));
      },
      "n0"_a, "J0"_a, "epsilon"_a);

  py::class_<StationaryProfile>(m, "StationaryProfile")
      .def_property_readonly("N_tilde", [](const StationaryProfile& p) { return to_array(p.N_tilde); })
      .def_property_readonly("E_tilde", [](const StationaryProfile& p) { return to_array(p.E_tilde); })
      .def_readonly("dx", &StationaryProfile::dx)
      .def_readonly("shoot_residual", &StationaryProfile::shoot_residual)
      .def_readonly("iterations", &StationaryProfile::iterations);

  m.def(
      "solve_stationary",
      [](const DopingProfile& d, const GasModel& g, std::size_t cells, double tol) {
        return solve_stationary(d, g, cells, {tol});
      },
      "doping"_a, "model"_a, "cells"_a, "tol"_a = 1e-10);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("dx", &Trajectory::dx)
      .def_readonly("clamp_events", &Trajectory::clamp_events)
      .def_property_readonly("t",
                             [](const Trajectory& tr) {
                               std::vector<double> t;
                               for (const auto& s : tr.snapshots) t.push_back(s.t);
                               return to_array(t);
                             })
      .def("n", [](const Trajectory& tr, std::size_t k) { return to_array(tr.snapshots.at(k).n); })
      .def("J", [](const Trajectory& tr, std::size_t k) { return to_array(tr.snapshots.at(k).J); })
      .def("E", [](const Trajectory& tr, std::size_t k) { return to_array(tr.snapshots.at(k).E.values); })
      .def("__len__", [](const Trajectory& tr) { return tr.snapshots.size(); });

  m.def(
      "run",
      [](const GasModel& g, const DopingProfile& d, const Array& n0, const Array& J0, double epsilon, double t_final,
         double output_interval, const std::string& scheme) {
        const auto n = to_vector(n0), J = to_vector(J0);
        SolverConfig cfg;
        cfg.model = g;
        cfg.epsilon = epsilon;
        cfg.cells = n.size() - 1;
        cfg.t_final = t_final;
        cfg.output_interval = output_interval;
        cfg.flux = flux_from(scheme);
        const auto init = prepare_initial(n, J, d, epsilon, cfg.dx());
        py::gil_scoped_release release;
        return ViscousSolver(cfg, d).run(init.n, init.J);
      },
      "model"_a, "doping"_a, "n0"_a, "J0"_a, "epsilon"_a, "t_final"_a, "output_interval"_a = 0.0,
      "scheme"_a = "central", "Projects, mollifies and integrates the initial data.");

  m.def(
      "choose_M",
      [](const Array& n0, const Array& J0, const DopingProfile& d, const GasModel& g) {
        const auto n = to_vector(n0), J = to_vector(J0);
        return choose_M(n, J, d, g, 1.0 / static_cast<double>(n.size() - 1));
      },
      "n0"_a, "J0"_a, "doping"_a, "model"_a);
  m.def(
      "coercivity_constants",
      [](std::pair<double, double> n_range, std::pair<double, double> N_range, const GasModel& g) {
        const auto r = coercivity_constants({n_range.first, n_range.second}, {N_range.first, N_range.second}, g);
        return py::make_tuple(r.C1, r.C2, r.violations);
      },
      "n_range"_a, "N_range"_a, "model"_a);
  m.def(
      "fit_decay_rate",
      [](const Array& t, const Array& phi, double t0, double t1) {
        const auto tv = to_vector(t), pv = to_vector(phi);
        const auto r = fit_decay_rate(tv, pv, {t0, t1});
        return py::dict("rate"_a = r.rate, "prefactor"_a = r.prefactor, "r2"_a = r.r2, "passed"_a = r.pass);
      },
      "t"_a, "phi"_a, "t0"_a, "t1"_a);

  m.def(
      "parse_config",
      [](const std::string& text) {
        const auto c = parse_config(text);
        return py::dict("gamma"_a = c.solver.model.gamma, "doping"_a = c.doping_spec, "epsilon"_a = c.solver.epsilon,
                        "N"_a = c.solver.cells, "T_final"_a = c.solver.t_final);
      },
      "text"_a, "Validates a config and returns its core fields.");
}
