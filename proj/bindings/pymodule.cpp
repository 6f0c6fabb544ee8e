#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siltlab/asymptotics.hpp"
#include "siltlab/estimators.hpp"
#include "siltlab/gn.hpp"
#include "siltlab/path.hpp"
#include "siltlab/silt.hpp"
#include "siltlab/version.hpp"

namespace py = pybind11;
using namespace siltlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "planar Brownian self-intersection local time laboratory";
  m.attr("__version__") = kVersion;

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y);

  py::class_<PlanarPath>(m, "PlanarPath")
      .def_readonly("dt", &PlanarPath::dt)
      .def_readonly("seed", &PlanarPath::seed)
      .def_property_readonly("n_steps", &PlanarPath::n_steps)
      .def_property_readonly("horizon", &PlanarPath::horizon)
      .def_property_readonly("positions", [](const PlanarPath& p) {
        std::vector<std::pair<double, double>> out;
        out.reserve(p.positions.size());
        for (const Vec2& v : p.positions) out.emplace_back(v.x, v.y);
        return out;
      });

  py::class_<Interval>(m, "Interval")
      .def(py::init([](std::size_t lo, std::size_t hi) { return Interval{lo, hi}; }))
      .def_readwrite("lo_index", &Interval::lo_index)
      .def_readwrite("hi_index", &Interval::hi_index);

  m.def("generate_path", &generate_path, py::arg("seed"), py::arg("dt"),
        py::arg("n_steps"));
  m.def("independent_pair", &independent_pair, py::arg("seed"), py::arg("dt"),
        py::arg("n_steps_x"), py::arg("n_steps_y"));
  m.def("rescale", &rescale, py::arg("path"), py::arg("c"));

  m.def("heat_kernel",
        [](double eps, double x, double y) {
          return heat_kernel(MollifierScale(eps), Vec2{x, y});
        },
        py::arg("eps"), py::arg("x"), py::arg("y"));
  m.def("alpha_hat",
        [](const PlanarPath& x, const PlanarPath& y, double eps, double s, double t) {
          return alpha_hat(x, y, MollifierScale(eps), s, t);
        },
        py::arg("x_path"), py::arg("y_path"), py::arg("eps"), py::arg("s"), py::arg("t"));
  m.def("cross_ilt",
        [](const PlanarPath& path, Interval I, Interval J, double eps) {
          return cross_ilt(path, I, J, MollifierScale(eps));
        },
        py::arg("path"), py::arg("I"), py::arg("J"), py::arg("eps"));

  py::class_<CenteredSilt>(m, "CenteredSilt")
      .def_readonly("raw", &CenteredSilt::raw)
      .def_readonly("centering", &CenteredSilt::centering)
      .def_readonly("value", &CenteredSilt::value)
      .def_readonly("eps", &CenteredSilt::eps)
      .def_readonly("T", &CenteredSilt::T);

  m.def("centering_term",
        [](double T, double eps) { return centering_term(T, MollifierScale(eps)); },
        py::arg("T"), py::arg("eps"));
  m.def("beta_hat",
        [](const PlanarPath& path, Interval I, double eps) {
          return beta_hat(path, I, MollifierScale(eps));
        },
        py::arg("path"), py::arg("I"), py::arg("eps"));
  m.def("c_n_hat",
        [](const PlanarPath& path, std::size_t n, double eps) {
          return c_n_hat(path, n, MollifierScale(eps));
        },
        py::arg("path"), py::arg("n"), py::arg("eps"));
  m.def("expected_alpha",
        [](double s, double t, double dist) {
          return expected_alpha(s, t, Vec2{0.0, 0.0}, Vec2{dist, 0.0});
        },
        py::arg("s"), py::arg("t"), py::arg("dist") = 0.0);
  m.def("expected_alpha_mollified",
        [](double s, double t, double eps) {
          return expected_alpha_mollified(s, t, MollifierScale(eps));
        },
        py::arg("s"), py::arg("t"), py::arg("eps"));

  py::class_<GroundState>(m, "GroundState")
      .def_readonly("u0", &GroundState::u0)
      .def_readonly("l2_sq", &GroundState::l2_sq)
      .def_readonly("grad_sq", &GroundState::grad_sq)
      .def_readonly("l4", &GroundState::l4)
      .def_readonly("r", &GroundState::r)
      .def_readonly("u", &GroundState::u);

  py::class_<GNConstants>(m, "GNConstants")
      .def_readonly("A", &GNConstants::A)
      .def_readonly("gamma_beta", &GNConstants::gamma_beta)
      .def_readonly("M", &GNConstants::M);

  m.def("solve_ground_state",
        [](double tol) { return solve_ground_state(tol); }, py::arg("tol") = 1e-10);
  m.def("gn_constants", &gn_constants, py::arg("ground_state"));

  m.def("occupation_sup_stat", &occupation_sup_stat, py::arg("path"),
        py::arg("horizon") = 1.0);
  m.def("identity_check",
        [](const PlanarPath& path, double eps, double T, double cell_size) {
          const IdentityCheck check =
              identity_check(path, MollifierScale(eps), T, cell_size);
          return py::make_tuple(check.pairwise, check.half_l2, check.rel_gap);
        },
        py::arg("path"), py::arg("eps"), py::arg("T"), py::arg("cell_size") = 0.0);
}
