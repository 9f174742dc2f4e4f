#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "concavlab/audit.hpp"
#include "concavlab/bounds.hpp"
#include "concavlab/config.hpp"
#include "concavlab/envelope.hpp"
#include "concavlab/errors.hpp"
#include "concavlab/parabolic.hpp"
#include "concavlab/properties.hpp"
#include "concavlab/report.hpp"
#include "concavlab/stationary.hpp"

namespace py = pybind11;
using namespace cvlab;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::array_t<double> array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> points(const DiscretizedDomain& dom) {
  py::array_t<double> out({static_cast<py::ssize_t>(dom.interior_count()), py::ssize_t{2}});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    const Point p = dom.interior_point(k);
    m(k, 0) = p.x;
    m(k, 1) = p.y;
  }
  return out;
}

Field field_from(DomainPtr dom, py::array_t<double, py::array::c_style | py::array::forcecast> values, double t) {
  require(values.ndim() == 1 && static_cast<std::size_t>(values.shape(0)) == dom->interior_count(),
          ErrorCode::invalid_argument, "values must hold one entry per interior node");
  Field f = Field::zeros(dom, t);
  std::copy(values.data(), values.data() + values.shape(0), f.values.begin());
  return f;
}

Scenario scenario_of(const std::string& scenario, const std::string& config, std::optional<double> h) {
  if (!config.empty()) return parse_config(config, h).scenario;
  return make_scenario(scenario, h.value_or(1.0 / 64));
}

AlphaVariant variant_of(const std::string& s) {
  if (s == "lane_emden") return AlphaVariant::lane_emden;
  if (s == "constant_weight") return AlphaVariant::constant_weight;
  if (s == "torsion") return AlphaVariant::torsion;
  fail(ErrorCode::invalid_argument, "variant must be lane_emden, constant_weight or torsion");
}

}  // namespace

PYBIND11_MODULE(_concavlab, m) {
  m.doc() = "Finite-difference concavity verification for semilinear heat equations";

  static py::exception<Error> error(m, "ConcavlabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<DomainSpec>(m, "DomainSpec")
      .def_static("unit_square", &DomainSpec::unit_square)
      .def_static("rectangle", &DomainSpec::rectangle, py::arg("width"), py::arg("height"))
      .def_static("disk", &DomainSpec::disk, py::arg("radius") = 1.0)
      .def_static("ellipse", &DomainSpec::ellipse, py::arg("a"), py::arg("b"))
      .def_static("polygon",
                  [](const std::vector<std::pair<double, double>>& v) {
                    std::vector<Point> pts;
                    for (auto [x, y] : v) pts.push_back({x, y});
                    return DomainSpec::polygon(pts);
                  })
      .def("inradius", &DomainSpec::inradius)
      .def("diameter", &DomainSpec::diameter)
      .def("__repr__", &DomainSpec::describe);

  py::class_<DiscretizedDomain, std::shared_ptr<DiscretizedDomain>>(m, "Grid")
      .def(py::init([](const DomainSpec& spec, double h) {
             return std::const_pointer_cast<DiscretizedDomain>(build_discretization(spec, h));
           }),
           py::arg("spec"), py::arg("h"))
      .def_property_readonly("h", &DiscretizedDomain::h)
      .def_property_readonly("nx", &DiscretizedDomain::nx)
      .def_property_readonly("ny", &DiscretizedDomain::ny)
      .def_property_readonly("interior_count", &DiscretizedDomain::interior_count)
      .def("points", &points, "interior node coordinates, shape (n, 2)");

  m.def(
      "principal_eigenpair",
      [](std::shared_ptr<DiscretizedDomain> g) {
        const Eigenpair e = principal_eigenpair(g);
        return py::make_tuple(e.lambda, array(e.phi.values));
      },
      py::arg("grid"), "smallest eigenvalue of the discrete Dirichlet Laplacian and its sup-normalized eigenvector");

  m.def(
      "laplacian",
      [](std::shared_ptr<DiscretizedDomain> g, py::array_t<double, py::array::c_style | py::array::forcecast> v) {
        return array(apply_laplacian(field_from(g, v, 0.0)).values);
      },
      py::arg("grid"), py::arg("values"));

  m.def("alpha_exponent",
        [](double q, double gamma, double beta, double theta, const std::string& variant) {
          return alpha_exponent(q, gamma, beta, theta, variant_of(variant));
        },
        py::arg("q"), py::arg("gamma"), py::arg("beta"), py::arg("theta") = kInf,
        py::arg("variant") = "lane_emden");
  m.def("hyers_ulam_constant", &hyers_ulam_constant, py::arg("n"));
  m.def("concavity_value", py::overload_cast<double, double, double, double>(&concavity_value), py::arg("u1"),
        py::arg("u2"), py::arg("u3"), py::arg("lam"));
  m.def("harmonic_concavity_value",
        py::overload_cast<double, double, double, double>(&harmonic_concavity_value), py::arg("g1"), py::arg("g2"),
        py::arg("g3"), py::arg("lam"), "None outside the domain of the harmonic concavity function");

  m.def(
      "concave_approximation_1d",
      [](const std::vector<double>& x, const std::vector<double>& f) {
        const Envelope1D e = concave_approximation(x, f);
        py::dict d;
        d["g"] = array(e.g);
        d["majorant"] = array(e.majorant);
        d["hull"] = e.hull;
        d["certificate"] = to_py(to_json(e.certificate));
        return d;
      },
      py::arg("x"), py::arg("f"));

  m.def(
      "concave_approximation",
      [](std::shared_ptr<DiscretizedDomain> g, py::array_t<double, py::array::c_style | py::array::forcecast> v) {
        const Envelope2D e = concave_approximation(field_from(g, v, 0.0));
        py::dict d;
        d["g"] = array(e.g.values);
        d["majorant"] = array(e.majorant.values);
        d["certificate"] = to_py(to_json(e.certificate));
        return d;
      },
      py::arg("grid"), py::arg("values"));

  m.def(
      "audit",
      [](std::shared_ptr<DiscretizedDomain> g, py::array_t<double, py::array::c_style | py::array::forcecast> v,
         double alpha, bool log, const std::string& mode) {
        require(mode == "space" || mode == "harmonic", ErrorCode::invalid_argument, "mode must be space or harmonic");
        const TransformSpec spec{log ? Transform::log : Transform::power, alpha, 1.0};
        const AuditMode am = mode == "harmonic" ? AuditMode::harmonic : AuditMode::space;
        const AuditField field(field_from(g, v, 0.0), spec);
        return to_py(to_json(min_defect(field, am)));
      },
      py::arg("grid"), py::arg("values"), py::arg("alpha") = 1.0, py::arg("log") = false, py::arg("mode") = "space",
      "concavity defect of one field after the power or log transform");

  m.def(
      "solve",
      [](const std::string& scenario, const std::string& config, std::optional<double> h) {
        const Scenario s = scenario_of(scenario, config, h);
        const double dt = s.grid.dt > 0.0 ? s.grid.dt : s.grid.h;
        DomainPtr dom = build_discretization(s.problem.domain, s.grid.h);
        const double t0 = needs_seed(s.problem) ? default_seed_time(dt, s.grid.T) : 0.0;
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = solve_trajectory(s.problem, dom, TimeGrid::rescaled(t0, s.grid.T, s.audit.beta, dt, s.grid.substeps));
        }
        py::array_t<double> snaps({static_cast<py::ssize_t>(traj.snapshots.size()),
                                   static_cast<py::ssize_t>(dom->interior_count())});
        auto w = snaps.mutable_unchecked<2>();
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
          for (std::size_t k = 0; k < dom->interior_count(); ++k) w(i, k) = traj.snapshots[i].values[k];
        py::dict d;
        d["times"] = array(traj.times());
        d["values"] = snaps;
        d["points"] = points(*dom);
        d["seeded"] = traj.seeded;
        d["monotone"] = traj.monotone_nondecreasing;
        d["tau_mono"] = traj.tau_mono;
        return d;
      },
      py::arg("scenario") = "torsion-square", py::arg("config") = "", py::arg("h") = py::none(),
      "integrates a built-in scenario or a config text; returns times, snapshot values and node points");

  m.def(
      "stationary",
      [](const std::string& scenario, const std::string& config, std::optional<double> h) {
        const Scenario s = scenario_of(scenario, config, h);
        DomainPtr dom = build_discretization(s.problem.domain, s.grid.h);
        const StationaryResult r = solve_stationary(s.problem, dom);
        py::dict d;
        d["values"] = array(r.v.values);
        d["points"] = points(*dom);
        d["residual"] = r.residual;
        d["change"] = r.change;
        d["iterations"] = r.iterations;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("scenario") = "torsion-square", py::arg("config") = "", py::arg("h") = py::none());

  m.def("scenario_ids", &scenario_ids);
  m.def(
      "run_scenario",
      [](const std::string& scenario, const std::string& config, std::optional<double> h) {
        const Scenario s = scenario_of(scenario, config, h);
        ScenarioReport r;
        {
          py::gil_scoped_release release;
          r = run_scenario(s);
        }
        return to_py(to_json(r));
      },
      py::arg("scenario") = "torsion-square", py::arg("config") = "", py::arg("h") = py::none(),
      "runs one scenario and returns its report as a dict");
  m.def(
      "run_suite",
      [](const std::vector<std::string>& ids, double h, unsigned jobs) {
        std::vector<Scenario> list;
        for (const auto& id : ids) list.push_back(make_scenario(id, h));
        std::vector<ScenarioReport> reps;
        {
          py::gil_scoped_release release;
          reps = run_scenarios(list, jobs);
        }
        py::list out;
        for (const auto& r : reps) out.append(to_py(to_json(r)));
        return py::make_tuple(out, to_py(suite_summary(reps)));
      },
      py::arg("ids"), py::arg("h") = 1.0 / 64, py::arg("jobs") = 0u);
  m.def(
      "property_suite",
      [](std::uint64_t seed, long draws, double tol) { return to_py(to_json(run_property_suite(seed, draws, tol))); },
      py::arg("seed") = 1, py::arg("draws") = 10000, py::arg("tol") = 1e-10);
  m.def("config_reference", &config_reference);
}
