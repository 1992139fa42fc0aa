#include "imcf/cli_io.hpp"
#include "imcf/geometry_checks.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace imcf;

namespace {

FlowConfig config_from(const py::dict& options) {
  ConfigDocument doc;
  for (const auto& [k, v] : options) {
    doc.set(py::str(k), py::str(v));
  }
  return resolve_config(doc);
}

py::dict record_dict(const TrajectoryRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["min_u"] = r.min_u;
  d["max_u"] = r.max_u;
  d["min_phi"] = r.min_phi;
  d["max_phi"] = r.max_phi;
  d["min_phidot"] = r.min_phidot;
  d["max_phidot"] = r.max_phidot;
  d["max_grad_phi"] = r.max_grad_phi;
  d["min_H_theta"] = r.min_H_theta;
  d["max_H_theta"] = r.max_H_theta;
  d["area"] = r.area;
  d["rescaled_area"] = r.rescaled_area;
  d["osc_rescaled_u"] = r.osc_rescaled_u;
  d["dt_used"] = r.dt_used;
  return d;
}

py::list checks_list(const InvariantReport& rep) {
  py::list out;
  for (const auto& c : rep.checks) {
    out.append(py::make_tuple(c.name, to_string(c.verdict), c.worst_violation, c.time_of_worst));
  }
  return out;
}

GraphPointData point_data(double u, const Vector& du, const Matrix& hess, const Vector& y) {
  GraphPointData d;
  d.u = u;
  d.du = du;
  d.hess_u = hess;
  d.point = ChartPoint{y};
  return d;
}

}  // namespace

PYBIND11_MODULE(_imcf, m) {
  m.doc() = "Inverse mean curvature flow of spacelike graphs in hyperbolic space";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<SingularityError> singularity_error(m, "SingularityError", PyExc_RuntimeError);
  static py::exception<MonitorFailure> monitor_failure(m, "MonitorFailure", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const SingularityError& e) {
      py::set_error(singularity_error, e.what());
    } catch (const MonitorFailure& e) {
      py::set_error(monitor_failure, e.what());
    }
  });

  m.attr("TRAJECTORY_HEADER") = std::string(kTrajectoryHeader);

  m.def("minkowski_inner", [](const Vector& a, const Vector& b) {
    return minkowski_inner(AmbientVector{a}, AmbientVector{b});
  });
  m.def("chart_embed", [](const Vector& y) { return chart_embed(ChartPoint{y}).components; });
  m.def("metric_sigma", [](const Vector& y) {
    const MetricSample s = metric_sigma(ChartPoint{y});
    return py::make_tuple(s.sigma, s.sigma_inv, s.sqrt_det_sigma);
  }, "sigma, its inverse and sqrt(det sigma) at chart point y");
  m.def("christoffel_sigma", [](const Vector& y) { return christoffel_sigma(ChartPoint{y}); },
        "list of matrices, entry k holds Gamma^k_ij");
  m.def("mean_curvature", [](double u, const Vector& du, const Matrix& hess, const Vector& y) {
    const MeanCurvature mc = mean_curvature(point_data(u, du, hess, y));
    return py::make_tuple(mc.H, mc.H_trace);
  }, py::arg("u"), py::arg("du"), py::arg("hess"), py::arg("y"),
     "H through the phi form and through trace(g^-1 h)");
  m.def("support_function", [](double u, const Vector& du, const Matrix& hess, const Vector& y) {
    return support_function(point_data(u, du, hess, y));
  });
  m.def("oracle_round", &oracle_round, py::arg("r0"), py::arg("n"), py::arg("t"));

  m.def("config_keys", [] {
    py::list out;
    for (const auto& k : config_keys()) out.append(py::make_tuple(k.name, k.default_value, k.help));
    return out;
  });
  m.def("resolve_config", [](const py::dict& options) { return render_config(config_from(options)); },
        py::arg("options") = py::dict(), "fully resolved config text");

  m.def("evolve", [](const py::dict& options, const std::string& flow) {
    FlowConfig cfg = config_from(options);
    if (flow == "rescaled") cfg.flow = FlowMode::Rescaled;
    else if (flow != "raw") throw ConfigError("flow must be raw or rescaled");
    EvolveResult res;
    {
      py::gil_scoped_release release;
      res = evolve(cfg);
    }
    py::list records;
    for (const auto& r : res.records) records.append(record_dict(r));
    const GraphState& s = res.final_state;
    std::vector<double> u(s.grid().interior_size());
    for (int k = 0; k < s.grid().interior_size(); ++k) u[k] = s.u.interior(k);
    py::dict out;
    out["records"] = records;
    out["steps"] = res.steps;
    out["t"] = s.t;
    out["c"] = s.c;
    out["u"] = u;
    out["checks"] = checks_list(res.report);
    out["all_pass"] = res.report.all_pass();
    return out;
  }, py::arg("options") = py::dict(), py::arg("flow") = "raw",
     "integrate the flow; options use config keys");

  m.def("geometry_check", [] {
    const InvariantReport rep = checks::run_all();
    return py::make_tuple(rep.all_pass(), checks_list(rep));
  });

  m.def("run", [](const py::dict& options, const std::string& flow) {
    FlowConfig cfg = config_from(options);
    if (flow == "rescaled") cfg.flow = FlowMode::Rescaled;
    std::ostringstream log;
    const int code = cmd_run(cfg, log);
    return py::make_tuple(code, log.str());
  }, py::arg("options") = py::dict(), py::arg("flow") = "raw",
     "the `run` subcommand: writes out_dir and returns (exit code, log)");
}
