#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dml/degrees.hpp"
#include "dml/errors.hpp"
#include "dml/parse.hpp"
#include "dml/report.hpp"
#include "dml/return_set.hpp"

namespace py = pybind11;

namespace {

// Same error handling as the CLI: failures come back as ERROR reports.
std::string run_text(const std::string& text, const std::vector<std::string>& overrides) {
  std::string command = "unknown";
  const auto doc = dml::Json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("command") && doc["command"].is_string()) command = doc["command"];
  dml::Report report;
  try {
    report = dml::run(dml::parse_problem_text(text, overrides));
  } catch (const dml::ParseError& e) {
    report = dml::error_report(command, "ParseError", e.what(), e.offset());
  } catch (const dml::Error& e) {
    report = dml::error_report(command, "SchemaError", e.what());
  }
  return report.to_json().dump();
}

std::vector<std::uint64_t> brute_force(const std::vector<std::string>& map, const std::vector<std::string>& point,
                                       const std::string& target, std::uint64_t n_max) {
  const dml::Field Q = dml::Field::rational();
  dml::PolyMap f = dml::parse_map(map, Q);
  dml::Point x = dml::parse_point(point, Q);
  dml::MultiPoly g = dml::parse_poly(target, f.dim(), Q);
  return dml::brute_force_returns(dml::OrbitProblem(std::move(f), std::move(x), std::move(g)), n_max);
}

std::vector<std::uint64_t> degrees(const std::vector<std::string>& map, std::uint64_t n_max) {
  return dml::degree_sequence(dml::parse_map(map, dml::Field::rational()), n_max).degrees;
}

}  // namespace

PYBIND11_MODULE(_dml, m) {
  m.doc() = "Bindings for the dml core library";
  m.attr("__version__") = dml::kToolVersion;
  m.def("run_json", &run_text, py::arg("text"), py::arg("overrides") = std::vector<std::string>{},
        "Run a problem given as JSON text; returns the report as JSON text.");
  m.def("brute_force", &brute_force, py::arg("map"), py::arg("point"), py::arg("target"), py::arg("n_max"),
        "Indices n <= n_max with target(f^n(x)) = 0, over Q.");
  m.def("degrees", &degrees, py::arg("map"), py::arg("n_max"), "deg f^n for n = 1..n_max, over Q.");
  py::register_exception<dml::Error>(m, "DmlError");
}
