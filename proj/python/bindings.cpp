#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "camplan/catalog.hpp"
#include "camplan/error.hpp"
#include "camplan/model.hpp"
#include "camplan/profiles.hpp"
#include "camplan/simulator.hpp"
#include "camplan/solver.hpp"

namespace py = pybind11;
using nlohmann::json;

// Everything crosses the boundary as JSON text; the Python package wraps
// these with dict-in/dict-out helpers.

namespace {

using namespace camplan;

SolverLimits limits(std::uint64_t max_nodes, double time_budget_s) {
  SolverLimits l;
  l.max_nodes = max_nodes;
  l.time_budget_s = time_budget_s;
  return l;
}

std::string plan(const std::string& catalog, const std::string& profiles, const std::string& workload,
                 const std::string& strategy, double headroom, std::uint64_t max_nodes, double time_budget_s) {
  const Plan p = plan_workload(load_workload(json::parse(workload)), load_catalog(json::parse(catalog)),
                               load_profiles(json::parse(profiles)), parse_strategy(strategy), headroom,
                               limits(max_nodes, time_budget_s));
  return plan_to_json(p).dump();
}

std::string compare(const std::string& catalog, const std::string& profiles, const std::string& workload,
                    double headroom, std::uint64_t max_nodes, double time_budget_s) {
  const Catalog c = load_catalog(json::parse(catalog));
  const auto rows = compare_strategies(load_workload(json::parse(workload)), c,
                                       load_profiles(json::parse(profiles)), headroom,
                                       limits(max_nodes, time_budget_s));
  return comparison_to_json(rows, c).dump();
}

std::string simulate_plan(const std::string& catalog, const std::string& profiles, const std::string& workload,
                     const std::string& plan, double headroom) {
  const Catalog c = load_catalog(json::parse(catalog));
  const ProfileStore store = load_profiles(json::parse(profiles));
  const Workload w = load_workload(json::parse(workload));
  const Plan p = plan_from_json(json::parse(plan));
  json out = report_to_json(camplan::simulate(p, w, store, c));
  out["violations"] = violations_to_json(check_plan(p, w, store, c, headroom));
  return out.dump();
}

std::string fit(const std::string& samples, const std::string& program, const std::string& device,
                const std::string& frame_size, const std::string& reference_machine,
                std::optional<double> max_rate) {
  const TestRunFile run = load_test_run(json::parse(samples));
  Profile p = fit_profile(run.samples, parse_device(device), parse_frame_size(frame_size),
                          parse_reference_machine(reference_machine));
  p.program = program;
  p.max_rate = max_rate;
  p.validate();
  return profile_to_json(p).dump();
}

std::vector<double> capacity(const std::string& catalog, const std::string& type) {
  const Catalog c = load_catalog(json::parse(catalog));
  const InstanceType* t = c.find(type);
  if (!t) throw ValidationError("unknown instance type " + type);
  const ResourceVector v = capacity_vector(*t, c.n_max());
  return {v.begin(), v.end()};
}

std::vector<double> fractions(const std::string& profile, double rate) {
  const Fractions f = demand_fraction(profile_from_json(json::parse(profile)), rate);
  return {f.begin(), f.end()};
}

double profile_speedup(const std::string& cpu, const std::string& gpu) {
  return speedup(profile_from_json(json::parse(cpu)), profile_from_json(json::parse(gpu)));
}

std::string solve(const std::string& instance, const std::string& method, std::uint64_t max_nodes,
                  double time_budget_s) {
  const PackingInstance inst = instance_from_json(json::parse(instance));
  Solution s;
  if (method == "exact") {
    s = solve_exact(inst, limits(max_nodes, time_budget_s));
  } else if (method == "heuristic") {
    s = solve_heuristic(inst);
  } else if (method == "brute_force") {
    s = brute_force(inst);
  } else {
    throw UsageError("unknown method '" + method + "' (expected exact, heuristic or brute_force)");
  }
  return solution_to_json(s).dump();
}

double bound(const std::string& instance) { return lower_bound(instance_from_json(json::parse(instance))); }

std::string synth_run(const std::string& profile, double rate, std::size_t n, double noise,
                      std::uint64_t seed) {
  const Profile truth = profile_from_json(json::parse(profile));
  TestRunFile run;
  run.program = truth.program;
  run.device = truth.device;
  run.frame_size = truth.frame_size;
  run.reference_machine = truth.reference_machine;
  run.max_rate = truth.max_rate;
  run.samples = generate_test_run(truth, rate, n, noise, seed);
  return test_run_to_json(run).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cost-minimizing CPU/GPU instance planner for camera-stream analysis";

  auto base = py::register_exception<camplan::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<camplan::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<camplan::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<camplan::InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<camplan::ContractError>(m, "ContractError", base.ptr());
  py::register_exception<camplan::RefusalError>(m, "RefusalError", base.ptr());
  py::register_exception<camplan::ResourceExhaustedError>(m, "ResourceExhaustedError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.attr("default_headroom") = camplan::kDefaultHeadroom;
  const SolverLimits d;

  m.def("plan", &plan, py::arg("catalog"), py::arg("profiles"), py::arg("workload"),
        py::arg("strategy") = "st3", py::arg("headroom") = camplan::kDefaultHeadroom,
        py::arg("max_nodes") = d.max_nodes, py::arg("time_budget_s") = d.time_budget_s,
        py::call_guard<py::gil_scoped_release>());
  m.def("compare", &compare, py::arg("catalog"), py::arg("profiles"), py::arg("workload"),
        py::arg("headroom") = camplan::kDefaultHeadroom, py::arg("max_nodes") = d.max_nodes,
        py::arg("time_budget_s") = d.time_budget_s, py::call_guard<py::gil_scoped_release>());
  m.def("simulate", &simulate_plan, py::arg("catalog"), py::arg("profiles"), py::arg("workload"),
        py::arg("plan"), py::arg("headroom") = camplan::kDefaultHeadroom);
  m.def("fit_profile", &fit, py::arg("samples"), py::arg("program"), py::arg("device"),
        py::arg("frame_size"), py::arg("reference_machine"), py::arg("max_rate") = py::none());
  m.def("capacity_vector", &capacity, py::arg("catalog"), py::arg("instance_type"));
  m.def("demand_fraction", &fractions, py::arg("profile"), py::arg("rate"));
  m.def("speedup", &profile_speedup, py::arg("cpu_profile"), py::arg("gpu_profile"));
  m.def("solve", &solve, py::arg("instance"), py::arg("method") = "exact",
        py::arg("max_nodes") = d.max_nodes, py::arg("time_budget_s") = d.time_budget_s,
        py::call_guard<py::gil_scoped_release>());
  m.def("lower_bound", &bound, py::arg("instance"));
  m.def("synth_run", &synth_run, py::arg("profile"), py::arg("rate"), py::arg("count"),
        py::arg("noise") = 0.0, py::arg("seed") = 0);
}
