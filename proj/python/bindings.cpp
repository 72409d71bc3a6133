#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orlicz/bound_engine.hpp"
#include "orlicz/config.hpp"
#include "orlicz/error.hpp"
#include "orlicz/mc_lab.hpp"
#include "orlicz/nfunc.hpp"
#include "orlicz/orlicz_norms.hpp"
#include "orlicz/ou_model.hpp"

namespace py = pybind11;
using namespace orlicz;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orlicz N-functions, norms and OU supremum bounds";

  auto base = py::register_exception<Error>(m, "OrliczError", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<DomainOverflow>(m, "DomainOverflow", base.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<DivergentIntegral>(m, "DivergentIntegral", base.ptr());
  py::register_exception<SingularEndpoint>(m, "SingularEndpoint", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<NFunction>(m, "NFunction")
      .def("__call__", &NFunction::operator())
      .def_property_readonly("name", &NFunction::name)
      .def_property_readonly("eval_domain_cap", &NFunction::eval_domain_cap)
      .def("inverse", [](const NFunction& U, double y) { return generalized_inverse(U, y); })
      .def("conjugate", [](const NFunction& U, double x) { return conjugate(U, x); })
      .def("__repr__", [](const NFunction& U) { return "<NFunction " + U.name() + ">"; });

  m.def("power", [](double c, double p) { return make_catalog_function(catalog::Power{c, p}); },
        py::arg("c") = 1.0, py::arg("p") = 2.0);
  m.def("exp_linear", [] { return make_catalog_function(catalog::ExpLinear{}); });
  m.def("exp_power", [](double a, double b) { return make_catalog_function(catalog::ExpPower{a, b}); },
        py::arg("a") = 1.0, py::arg("b") = 2.0);
  m.def("power_over_p", [](double p) { return make_catalog_function(catalog::PowerOverP{p}); },
        py::arg("p") = 2.0);
  m.def("piecewise_exp", [](double alpha) { return make_catalog_function(catalog::PiecewiseExp{alpha}); },
        py::arg("alpha") = 0.5);
  m.def("biconjugate_residual", [](const NFunction& U, const std::vector<double>& grid) {
    return biconjugate_residual(U, grid);
  });

  m.def("luxembourg_norm", [](const NFunction& U, const std::vector<double>& xs) {
    return luxembourg_norm_samples(U, SampleSet{xs, 0});
  });
  m.def("luxembourg_norm_weighted",
        [](const NFunction& U, const std::vector<double>& values, const std::vector<double>& weights) {
          return luxembourg_norm_values(U, values, weights);
        });
  m.def("chebyshev_tail", [](const NFunction& U, double norm, double x) {
    const auto t = chebyshev_tail(U, norm, x);
    return py::make_tuple(t.raw, t.clamped);
  });

  py::class_<OUModel>(m, "OUModel")
      .def(py::init([](double tau, double T, double beta1, double beta2, double alpha_zeta) {
             return OUModel{tau, T, beta1, beta2, alpha_zeta};
           }),
           py::arg("tau") = 1.0, py::arg("T") = 1.0, py::arg("beta1") = 0.5, py::arg("beta2") = 0.95,
           py::arg("alpha_zeta") = 2.5)
      .def_readwrite("tau", &OUModel::tau)
      .def_readwrite("T", &OUModel::T)
      .def_readwrite("beta1", &OUModel::beta1)
      .def_readwrite("beta2", &OUModel::beta2)
      .def_readwrite("alpha_zeta", &OUModel::alpha_zeta);

  m.def("betas_admissible", &betas_admissible);
  m.def("alpha_interval", &alpha_interval);
  m.def("gamma2_closed", &gamma2_closed, py::arg("model"), py::arg("f_integral") = 0.0);
  m.def("nu_t_closed", &nu_t_closed);
  m.def("d_p2_closed", &d_p2_closed);
  m.def("d_p2_quad", &d_p2_quad, py::arg("model"), py::arg("p"), py::arg("t_grid_points") = 65,
        py::arg("quad_tol") = 1e-6);
  m.def("delta2_quad",
        [](const OUModel& om, double c, double kappa, double tol) { return delta2_quad(om, {c, kappa}, tol); },
        py::arg("model"), py::arg("c") = 0.0, py::arg("kappa") = 1.0, py::arg("quad_tol") = 1e-6);

  py::class_<Theorem4Fit>(m, "BoundFit")
      .def_readonly("constant", &Theorem4Fit::constant)
      .def_readonly("alpha_star", &Theorem4Fit::alpha_star)
      .def_readonly("p_star", &Theorem4Fit::p_star)
      .def_readonly("gamma2", &Theorem4Fit::gamma2)
      .def_readonly("delta2", &Theorem4Fit::delta2)
      .def_readonly("d_p2", &Theorem4Fit::d_p2)
      .def("__call__", [](const Theorem4Fit& f, double x) { return theorem4_apply(f, x).raw; });

  m.def(
      "fit_ou_bound",
      [](const OUModel& om, double f_integral, double c, double kappa, int p_grid, int alpha_steps,
         int t_grid_points, double quad_tol) {
        Theorem4Options o;
        o.p_search.grid = p_grid;
        o.alpha_steps = alpha_steps;
        o.t_grid_points = t_grid_points;
        o.quad_tol = quad_tol;
        py::gil_scoped_release nogil;
        return theorem4_fit_optimized(om, f_integral, {c, kappa}, o);
      },
      py::arg("model"), py::arg("f_integral") = 0.0, py::arg("c") = 0.0, py::arg("kappa") = 1.0,
      py::arg("p_grid") = 19, py::arg("alpha_steps") = 40, py::arg("t_grid_points") = 65,
      py::arg("quad_tol") = 1e-6);

  m.def(
      "ou_sup_tail",
      [](const OUModel& om, int grid_points, std::size_t n_paths, std::uint64_t seed,
         const std::vector<double>& x_grid) {
        TailReport r;
        {
          py::gil_scoped_release nogil;
          const auto b = sample_ou_batch(om, grid_points, n_paths, seed);
          r = empirical_sup_tail(b, [](double) { return 0.0; }, x_grid);
        }
        return py::make_tuple(r.empirical, r.ci_halfwidth);
      },
      py::arg("model"), py::arg("grid_points"), py::arg("n_paths"), py::arg("seed"), py::arg("x_grid"));

  m.def("ou_path", [](const OUModel& om, const std::vector<double>& points, std::uint64_t seed,
                      std::uint64_t index) {
    std::vector<double> out(points.size());
    sample_ou_path(om, points, seed, index, out);
    return out;
  });
}
