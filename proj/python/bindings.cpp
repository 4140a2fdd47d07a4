#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamhop/bisection.hpp"
#include "beamhop/errors.hpp"
#include "beamhop/methods.hpp"
#include "beamhop/pattern_io.hpp"
#include "beamhop/simulator.hpp"
#include "beamhop/sylvester.hpp"

namespace py = pybind11;
using namespace beamhop;

namespace {

py::dict report_dict(const SuccessReport& r) {
  py::dict d;
  d["p_a"] = r.p_a;
  d["p_d_low"] = r.p_d_low;
  d["p_suc_low"] = r.p_suc_low;
  d["min"] = r.min;
  d["mean"] = r.mean;
  d["argmin"] = r.argmin();
  if (r.p_suc_mc) {
    d["p_suc_mc"] = *r.p_suc_mc;
    d["mc_stderr"] = *r.mc_stderr;
  }
  return d;
}

GeneratorConfig make_config(const std::string& scale, py::kwargs kw) {
  GeneratorConfig c = scale == "desk" ? GeneratorConfig::desk() : GeneratorConfig::reference();
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    auto v = item.second;
    if (key == "n_cells") c.n_cells = v.cast<int>();
    else if (key == "n_b") c.n_b = v.cast<int>();
    else if (key == "n_slot") c.n_slot = v.cast<int>();
    else if (key == "alpha") c.alpha = v.cast<double>();
    else if (key == "n_avg") c.n_avg = v.cast<double>();
    else if (key == "beta") c.beta = v.cast<double>();
    else if (key == "eta") c.eta = v.cast<double>();
    else if (key == "seed") c.seed = v.cast<std::uint64_t>();
    else if (key == "lat") c.satellite.nadir.lat_deg = v.cast<double>();
    else if (key == "lon") c.satellite.nadir.lon_deg = v.cast<double>();
    else throw ValidationError("generate: unknown option '" + key + "'");
  }
  return c;
}

} // namespace

PYBIND11_MODULE(_beamhop, m) {
  m.doc() = "Beam-hopping pattern design for grant-free satellite IoT access";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SizeError>(m, "SizeError", base.ptr());
  py::register_exception<SingularError>(m, "SingularError", base.ptr());
  py::register_exception<InternalError>(m, "InternalError", base.ptr());

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("n_cells", &Scenario::n_cells)
      .def_property_readonly("n_slot", &Scenario::n_slot)
      .def_property_readonly("n_b", &Scenario::n_b)
      .def_property_readonly("capacity", &Scenario::capacity)
      .def_property_readonly("gains", &Scenario::gains)
      .def_property_readonly("demands", &Scenario::demands)
      .def_property_readonly("activations", &Scenario::activations)
      .def("__eq__", &Scenario::operator==)
      .def("json", [](const Scenario& s, bool gains) { return scenario_to_json(s, gains); },
           py::arg("include_gains") = true)
      .def_static("from_json", &scenario_from_json)
      .def_static("load", &load_scenario)
      .def("save", [](const Scenario& s, const std::string& p) { save_scenario(s, p); });

  m.def("generate", [](const std::string& scale, py::kwargs kw) { return generate_scenario(make_config(scale, kw)); },
        py::arg("scale") = "reference",
        "Synthetic scenario; keyword overrides: n_cells, n_b, n_slot, alpha, n_avg, beta, eta, seed, lat, lon.");

  py::class_<BeamHoppingPattern>(m, "Pattern")
      .def(py::init<Eigen::MatrixXi>())
      .def_property_readonly("matrix", &BeamHoppingPattern::matrix)
      .def_property_readonly("row_sums", &BeamHoppingPattern::row_sums)
      .def_property_readonly("col_sums", &BeamHoppingPattern::col_sums)
      .def("feasible", &BeamHoppingPattern::feasible)
      .def("capacity_ok", &BeamHoppingPattern::capacity_ok)
      .def("__eq__", &BeamHoppingPattern::operator==)
      .def("to_text", &pattern_to_text)
      .def_static("from_text", &pattern_from_text);

  m.def("success_lower_bound",
        [](const Scenario& s, const BeamHoppingPattern& x) { return report_dict(success_lower_bound(s, x)); });

  m.def("optimize",
        [](const Scenario& s, const std::string& method, std::uint64_t seed, int n_ao) {
          MethodSettings set;
          set.seed = seed;
          set.ao.n_ao = n_ao;
          set.genetic.seed = seed;
          MethodOutcome out = run_method(s, parse_method(method), set);
          py::dict d;
          d["pattern"] = out.x;
          d["report"] = report_dict(out.report);
          d["ms"] = out.ms;
          if (out.trace) {
            py::list rows;
            for (const auto& it : out.trace->iterations) {
              rows.append(py::make_tuple(it.iter, it.min_psuc, it.mean_psuc));
            }
            d["ao_trace"] = rows;
          }
          return d;
        },
        py::arg("scenario"), py::arg("method") = "b-l2a", py::arg("seed") = 1, py::arg("n_ao") = 5);

  m.def("bisect",
        [](const Scenario& s, const Eigen::VectorXd& p_d_low) {
          const BisectionResult r = bisect(s, p_d_low);
          return py::make_tuple(r.b, r.xi_lower);
        },
        "Slot allocation maximising the weakest success bound; returns (b, xi).");

  m.def("simulate",
        [](const Scenario& s, const BeamHoppingPattern& x, long long trials, std::uint64_t seed, int threads) {
          McConfig cfg;
          cfg.trials = trials;
          cfg.seed = seed;
          cfg.threads = threads;
          const McResult r = simulate(s, x, cfg);
          py::dict d;
          d["p_a"] = r.p_a;
          d["p_d"] = r.p_d;
          d["p_suc"] = r.p_suc;
          d["p_suc_se"] = r.p_suc_se;
          return d;
        },
        py::arg("scenario"), py::arg("pattern"), py::arg("trials") = 10000, py::arg("seed") = 1,
        py::arg("threads") = 1);

  m.def("solve_sylvester",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& c) {
          return solve_bartels_stewart(SylvesterProblem{a, b, c});
        },
        "Solves A X + X B = C.");

  m.def("collision_avoidance", &collision_avoidance, py::arg("alpha"), py::arg("n"), py::arg("n_r"), py::arg("b"));
}
