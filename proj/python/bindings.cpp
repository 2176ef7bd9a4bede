#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "sifdecay/cantor.hpp"
#include "sifdecay/cli.hpp"
#include "sifdecay/errors.hpp"
#include "sifdecay/gauge.hpp"
#include "sifdecay/poisson.hpp"
#include "sifdecay/profile.hpp"
#include "sifdecay/scan.hpp"

namespace py = pybind11;
using namespace sifdecay;

namespace {

nlohmann::json json_from_str(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "singular inner functions with certified minimum-modulus decay";

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<InvalidProfileError>(m, "InvalidProfileError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);
  py::register_exception<CalibrationError>(m, "CalibrationError", PyExc_RuntimeError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_RuntimeError);

  py::class_<DecayProfile>(m, "DecayProfile")
      .def_static("reciprocal_log", &DecayProfile::reciprocal_log, py::arg("scale"))
      .def_static("iterated_log", &DecayProfile::iterated_log, py::arg("scale"))
      .def_static("power", &DecayProfile::power, py::arg("scale"), py::arg("exponent") = 1.0)
      .def_static("from_json",
                  [](const std::string& text) { return DecayProfile::from_json(json_from_str(text)); })
      .def("__call__", &DecayProfile::operator(), py::arg("r"))
      .def("at_gap", &DecayProfile::at_gap, py::arg("gap"))
      .def("decay_radius", &DecayProfile::decay_radius, py::arg("delta"))
      .def("to_json", [](const DecayProfile& p) { return p.to_json().dump(); });

  py::class_<Gauge>(m, "Gauge")
      .def(py::init<const DecayProfile&>(), py::arg("profile"))
      .def_static("power_law", &Gauge::power_law, py::arg("alpha"))
      .def("g", &Gauge::g, py::arg("t"))
      .def("h", &Gauge::h, py::arg("t"))
      .def("h_pi", &Gauge::h_pi)
      .def("h_inverse", &Gauge::h_inverse, py::arg("y"));

  py::class_<CalibrationReport>(m, "CalibrationReport")
      .def_readonly("mass_scale", &CalibrationReport::mass_scale)
      .def_readonly("point_max_ratio", &CalibrationReport::point_max_ratio)
      .def_readonly("clause_mass", &CalibrationReport::clause_mass)
      .def_readonly("clause_ratio", &CalibrationReport::clause_ratio);

  py::class_<FrostmanReport>(m, "FrostmanReport")
      .def_readonly("pass_", &FrostmanReport::pass)
      .def_readonly("max_ratio", &FrostmanReport::max_ratio)
      .def_readonly("grid_max_ratio", &FrostmanReport::grid_max_ratio)
      .def_readonly("argmax_t", &FrostmanReport::argmax_t)
      .def_readonly("argmax_theta", &FrostmanReport::argmax_theta)
      .def_readonly("scale_points", &FrostmanReport::scale_points)
      .def_readonly("theta_points", &FrostmanReport::theta_points);

  py::class_<CantorModel>(m, "CantorModel")
      .def_property_readonly("max_generation", &CantorModel::max_generation)
      .def_property_readonly("total_mass", &CantorModel::total_mass)
      .def_property_readonly("mass_scale", &CantorModel::mass_scale)
      .def_property_readonly("base_start", &CantorModel::base_start)
      .def_property_readonly("lengths", &CantorModel::lengths)
      .def("length", &CantorModel::length, py::arg("generation"))
      .def("node_mass", &CantorModel::node_mass, py::arg("generation"))
      .def("arc_mass",
           [](const CantorModel& mdl, double start, double end) {
             MassBracket b = mdl.arc_mass(start, end);
             return py::make_tuple(b.lo, b.hi);
           },
           py::arg("start"), py::arg("end"))
      .def("calibration", &CantorModel::calibration)
      .def("with_mass_scale", &CantorModel::with_mass_scale, py::arg("scale"))
      .def("to_json", [](const CantorModel& mdl) { return mdl.to_json().dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return CantorModel::from_json(json_from_str(text)); });

  m.def(
      "build_model",
      [](const Gauge& gauge, int depth) {
        BuildOptions opts;
        opts.max_depth = depth;
        opts.depth_hint = std::min(12, depth);
        return build_model(gauge, opts);
      },
      py::arg("gauge"), py::arg("depth") = 40);

  m.def("verify_frostman", &verify_frostman, py::arg("model"), py::arg("theta_points") = 4096,
        py::arg("scale_points") = 512);
  m.def("hausdorff_upper_bound", &hausdorff_upper_bound, py::arg("model"), py::arg("generation"));
  m.def("hausdorff_lower_bound", &hausdorff_lower_bound, py::arg("model"));

  m.def(
      "log_modulus",
      [](const CantorModel& mdl, double r, double theta, double tol, bool with_conjugate) {
        PointEval pe = log_modulus(mdl, r, theta, tol, with_conjugate);
        py::dict d;
        d["r"] = pe.r;
        d["theta"] = pe.theta;
        d["u"] = pe.u;
        d["v"] = pe.v;
        d["u_error"] = pe.u_error;
        d["v_error"] = pe.v_error;
        d["nodes"] = pe.nodes;
        return d;
      },
      py::arg("model"), py::arg("r"), py::arg("theta"), py::arg("tol") = 1e-9,
      py::arg("with_conjugate") = true);

  m.def(
      "value",
      [](const CantorModel& mdl, double r, double theta, double tol) {
        return value(mdl, r, theta, tol);
      },
      py::arg("model"), py::arg("r"), py::arg("theta"), py::arg("tol") = 1e-9);

  m.def(
      "split_bound",
      [](const Gauge& gauge, double r, double eps) {
        SplitBound sb = split_bound(gauge, r, eps);
        return py::make_tuple(sb.near, sb.far);
      },
      py::arg("gauge"), py::arg("r"), py::arg("eps"));

  m.def(
      "min_on_circle",
      [](const CantorModel& mdl, double r, double tol) {
        CircleMin cm = min_on_circle(mdl, r, tol);
        py::dict d;
        d["r"] = cm.r;
        d["min_modulus_lo"] = cm.min_modulus_lo;
        d["min_modulus_hi"] = cm.min_modulus_hi;
        d["argmin_theta"] = cm.argmin_theta;
        d["u_max"] = cm.u_max;
        d["u_max_error"] = cm.u_max_error;
        return d;
      },
      py::arg("model"), py::arg("r"), py::arg("tol") = 1e-9);

  m.def(
      "certify_estimate",
      [](const CantorModel& mdl, const Gauge& gauge, std::vector<double> radii, double tol) {
        return scan_to_json(certify_estimate(mdl, gauge, std::move(radii), tol)).dump();
      },
      py::arg("model"), py::arg("gauge"), py::arg("radii"), py::arg("tol") = 1e-9);

  m.def(
      "fast_bound_check",
      [](double a, const std::vector<double>& radii) {
        FastBoundReport rep = fast_bound_check(a, radii);
        return py::make_tuple(rep.values, rep.infimum);
      },
      py::arg("a"), py::arg("radii"));

  m.def("radial_probe", &radial_probe, py::arg("model"), py::arg("theta_star"), py::arg("radii"),
        py::arg("tol") = 1e-9);

  m.def("parse_radii_spec", &parse_radii_spec, py::arg("spec"));
  m.def("run_cli", &run_cli, py::arg("args"));
}
