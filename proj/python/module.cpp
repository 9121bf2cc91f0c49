#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "evasion/harness.hpp"

namespace py = pybind11;
using namespace evasion;

namespace {

CostSpec make_spec(Point target, Vector weights, double exponent) {
  CostSpec spec{std::move(target), std::move(weights), exponent};
  spec.validate();
  return spec;
}

py::dict record_to_dict(const TrialRecord& r) {
  py::dict d;
  d["algorithm"] = r.algorithm;
  d["dims"] = r.dims;
  d["exponent"] = r.exponent;
  d["epsilon"] = r.epsilon;
  d["seed"] = r.seed;
  d["queries"] = r.queries;
  d["iterations"] = r.iterations;
  d["final_cost"] = r.final_cost;
  d["mac_reference"] = r.mac_reference;
  d["ratio"] = r.ratio;
  d["bound_ok"] = r.bound_ok;
  d["termination"] = r.termination;
  d["mac_provenance"] = r.mac_provenance;
  return d;
}

}  // namespace

PYBIND11_MODULE(evasion, m) {
  m.doc() = "query-based evasion of convex-inducing classifiers";

  py::class_<CostSpec>(m, "CostSpec")
      .def(py::init(&make_spec), py::arg("target"), py::arg("weights"), py::arg("exponent") = 1.0)
      .def_readonly("target", &CostSpec::target)
      .def_readonly("weights", &CostSpec::weights)
      .def_readonly("exponent", &CostSpec::exponent)
      .def_property_readonly("dims", &CostSpec::dims);

  m.def("evaluate_cost", &evaluate_cost, py::arg("x"), py::arg("spec"),
        "weighted Lp distance from the cost target");
  m.def("l1_ball_vertices", &l1_ball_vertices, py::arg("radius"), py::arg("spec"));
  m.def(
      "steps_for_gap",
      [](double lower, double upper, double accuracy, bool multiplicative) {
        const auto mode =
            multiplicative ? OptimalityMode::multiplicative : OptimalityMode::additive;
        return steps_for_gap(BoundPair{lower, upper, mode}, accuracy);
      },
      py::arg("lower"), py::arg("upper"), py::arg("accuracy"), py::arg("multiplicative") = true);
  m.def("halfspace_mac", &halfspace_lp_mac, py::arg("normal"), py::arg("boundary_point"),
        py::arg("spec"), "exact minimal cost of reaching {x : x.w >= b.w}");
  m.def(
      "subgradient_cut",
      [](const Point& y, const CostSpec& spec) {
        const Halfspace h = subgradient_halfspace(y, spec);
        return py::make_tuple(h.normal, h.offset);
      },
      py::arg("y"), py::arg("spec"),
      "supporting halfspace (normal, offset) of the cost sublevel set at y");
  m.def("enclosed_lp_radius", &enclosed_lp_radius, py::arg("dims"), py::arg("exponent"));
  m.def("hypercube_covering_bound", &hypercube_covering_bound, py::arg("dims"), py::arg("delta"));
  m.def("cap_covering_bound", &cap_covering_bound, py::arg("dims"), py::arg("phi"));
  m.def("l2_query_lower_bound", &l2_query_lower_bound, py::arg("dims"), py::arg("epsilon"));
  m.def("lp_query_lower_bound", &lp_query_lower_bound, py::arg("dims"), py::arg("exponent"),
        py::arg("epsilon"));

  m.def(
      "evade",
      [](const std::string& config_json) {
        EvadeOutcome outcome = run_evade(parse_config(config_json));
        py::dict d = record_to_dict(outcome.record);
        d["witness"] = outcome.result.witness;
        d["lower"] = outcome.result.bounds.lower;
        d["upper"] = outcome.result.bounds.upper;
        return d;
      },
      py::arg("config_json"), "run one configured evasion trial end to end");
  m.def(
      "bench_csv",
      [](const std::string& config_json) {
        std::ostringstream out;
        run_bench(parse_config(config_json), out);
        return out.str();
      },
      py::arg("config_json"), "run a sweep grid and return the CSV text");
  m.def(
      "verify",
      [](const std::string& selector) {
        std::ostringstream out;
        const int failures = run_verify(selector, out);
        return py::make_tuple(failures, out.str());
      },
      py::arg("selector") = std::string{}, "run property suites; returns (failures, report)");
}
