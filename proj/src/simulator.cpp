#include "camplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>

#include "camplan/error.hpp"

namespace camplan {

using nlohmann::json;

namespace {

struct PlacedStream {
  std::string id;
  const StreamRequest* request = nullptr;
  const Profile* profile = nullptr;
  std::size_t instance = 0;  // index into Plan::instances
  ResourceVector demand;
};

struct Evaluation {
  std::vector<const InstanceType*> types;        // per plan instance
  std::vector<ResourceVector> capacity;          // raw, per plan instance
  std::vector<std::vector<double>> demand;       // summed, per plan instance
  std::vector<PlacedStream> streams;             // expanded workload order
};

Evaluation evaluate(const Plan& plan, const Workload& workload, const ProfileStore& profiles,
                    const Catalog& catalog) {
  Evaluation ev;
  const std::size_t n_max = catalog.n_max();
  std::map<std::size_t, std::size_t> index_of;
  for (std::size_t k = 0; k < plan.instances.size(); ++k) {
    const auto& pi = plan.instances[k];
    const InstanceType* t = catalog.find(pi.type);
    if (!t) throw ContractError("plan uses unknown instance type " + pi.type);
    if (!index_of.emplace(pi.ordinal, k).second) {
      throw ContractError("plan repeats instance ordinal " + std::to_string(pi.ordinal));
    }
    ev.types.push_back(t);
    ev.capacity.push_back(capacity_vector(*t, n_max));
    ev.demand.emplace_back(dims_for_gpus(n_max), 0.0);
  }

  std::map<std::string, const Assignment*, std::less<>> assignment_of;
  for (const auto& a : plan.assignments) {
    if (!assignment_of.emplace(a.stream_id, &a).second) {
      throw ContractError("stream " + a.stream_id + " is assigned twice");
    }
  }

  const auto refs = expand_workload(workload);
  for (const auto& ref : refs) {
    auto it = assignment_of.find(ref.id);
    if (it == assignment_of.end()) throw ContractError("stream " + ref.id + " is not assigned");
    const Assignment& a = *it->second;
    auto inst = index_of.find(a.instance);
    if (inst == index_of.end()) {
      throw ContractError(ref.id + " references missing instance " + std::to_string(a.instance));
    }
    const InstanceType& type = *ev.types[inst->second];
    if (a.gpu_slot && *a.gpu_slot >= type.gpus.size()) {
      throw ContractError(ref.id + " uses GPU slot " + std::to_string(*a.gpu_slot) + " but " +
                          type.name + " has " + std::to_string(type.gpus.size()) + " GPUs");
    }
    const StreamRequest& req = workload[ref.request];
    const Device device = a.gpu_slot ? Device::gpu_assisted : Device::cpu_only;
    const Profile* profile = profiles.find(req.program, req.frame_size, device);
    if (!profile) {
      throw ContractError(ref.id + ": no " + std::string(to_string(device)) + " profile for " +
                          req.program + " at " + to_string(req.frame_size));
    }
    PlacedStream ps{ref.id, &req, profile, inst->second,
                    demand_vector(*profile, req.desired_rate, n_max, a.gpu_slot)};
    for (std::size_t d = 0; d < ps.demand.size(); ++d) ev.demand[ps.instance][d] += ps.demand[d];
    ev.streams.push_back(std::move(ps));
  }
  if (assignment_of.size() != refs.size()) {
    for (const auto& a : plan.assignments) {
      bool known = std::any_of(refs.begin(), refs.end(), [&](const StreamRef& r) { return r.id == a.stream_id; });
      if (!known) throw ContractError("plan assigns unknown stream " + a.stream_id);
    }
  }
  return ev;
}

double ratio(double demand, double capacity) {
  if (demand == 0.0) return 0.0;
  return capacity > 0.0 ? demand / capacity : std::numeric_limits<double>::infinity();
}

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * x);
  return buf;
}

}  // namespace

std::string dimension_name(std::size_t dim) {
  if (dim == 0) return "cpu";
  if (dim == 1) return "memory";
  const std::size_t slot = (dim - 2) / 2;
  return "gpu" + std::to_string(slot) + ((dim - 2) % 2 == 0 ? "_cores" : "_memory");
}

SimulationReport simulate(const Plan& plan, const Workload& workload, const ProfileStore& profiles,
                          const Catalog& catalog) {
  const Evaluation ev = evaluate(plan, workload, profiles, catalog);
  SimulationReport report;
  for (std::size_t k = 0; k < plan.instances.size(); ++k) {
    InstanceUsage usage{plan.instances[k].ordinal, plan.instances[k].type, {}};
    for (std::size_t d = 0; d < ev.demand[k].size(); ++d) {
      usage.utilization.push_back(ratio(ev.demand[k][d], ev.capacity[k][d]));
    }
    report.per_instance.push_back(std::move(usage));
  }

  double total = 0.0;
  for (const auto& s : ev.streams) {
    double perf = 1.0;
    if (s.profile->max_rate) perf = std::min(perf, *s.profile->max_rate / s.request->desired_rate);
    for (std::size_t d = 0; d < s.demand.size(); ++d) {
      if (s.demand[d] == 0.0) continue;
      const double load = ev.demand[s.instance][d];
      perf = std::min(perf, std::min(1.0, ev.capacity[s.instance][d] / load));
    }
    report.per_stream.push_back({s.id, perf});
    total += perf;
  }
  report.overall_performance = ev.streams.empty() ? 1.0 : total / static_cast<double>(ev.streams.size());
  return report;
}

std::vector<Violation> check_plan(const Plan& plan, const Workload& workload,
                                  const ProfileStore& profiles, const Catalog& catalog,
                                  double headroom) {
  if (!(headroom > 0.0 && headroom <= 1.0)) throw ValidationError("headroom must be in (0, 1]");
  const Evaluation ev = evaluate(plan, workload, profiles, catalog);
  std::vector<Violation> out;
  for (std::size_t k = 0; k < plan.instances.size(); ++k) {
    for (std::size_t d = 0; d < ev.demand[k].size(); ++d) {
      const double cap = ev.capacity[k][d];
      if (ev.demand[k][d] <= headroom * cap + kCapacitySlack) continue;
      Violation v;
      v.kind = Violation::Kind::utilization;
      v.instance = plan.instances[k].ordinal;
      v.dimension = d;
      v.value = ratio(ev.demand[k][d], cap);
      v.limit = headroom;
      v.message = "instance " + std::to_string(v.instance) + " (" + plan.instances[k].type + ") " +
                  dimension_name(d) + " at " + percent(v.value) + " > " + percent(headroom);
      out.push_back(std::move(v));
    }
  }
  for (const auto& s : ev.streams) {
    if (rate_feasible(*s.profile, s.request->desired_rate)) continue;
    Violation v;
    v.kind = Violation::Kind::rate_cap;
    v.stream_id = s.id;
    v.value = s.request->desired_rate;
    v.limit = *s.profile->max_rate;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s desired %.2f FPS > %s max %.2f", s.request->program.c_str(),
                  v.value, s.profile->device == Device::cpu_only ? "cpu" : "gpu", v.limit);
    v.message = s.id + ": " + buf;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<TestRunSample> generate_test_run(const Profile& truth, double rate,
                                             std::size_t n_samples, double noise_sd,
                                             std::uint64_t seed, double duration_s) {
  truth.validate();
  if (!std::isfinite(noise_sd) || noise_sd < 0.0) throw ValidationError("noise_sd must be >= 0");
  if (!rate_feasible(truth, rate)) {
    throw ValidationError("test-run rate " + std::to_string(rate) + " exceeds max rate " +
                          std::to_string(*truth.max_rate));
  }
  const Fractions mean = demand_fraction(truth, rate);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::max(noise_sd, std::numeric_limits<double>::min()));

  std::vector<TestRunSample> samples;
  samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    TestRunSample s{rate, {}, duration_s};
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      const bool unused = truth.device == Device::cpu_only &&
                          (k == index(ResourceKind::gpu) || k == index(ResourceKind::gpu_memory));
      if (unused) continue;
      const double jitter = noise_sd > 0.0 ? noise(rng) : 0.0;
      s.utilization[k] = std::clamp(mean[k] + jitter, 0.0, 1.0);
    }
    samples.push_back(s);
  }
  return samples;
}

json report_to_json(const SimulationReport& report) {
  json instances = json::array();
  for (const auto& u : report.per_instance) {
    instances.push_back({{"ordinal", u.ordinal}, {"type", u.type}, {"utilization", u.utilization}});
  }
  json streams = json::array();
  for (const auto& s : report.per_stream) {
    streams.push_back({{"stream_id", s.stream_id}, {"performance", s.performance}});
  }
  return {{"per_instance", instances},
          {"per_stream", streams},
          {"overall_performance", report.overall_performance}};
}

json violations_to_json(const std::vector<Violation>& violations) {
  json out = json::array();
  for (const auto& v : violations) {
    if (v.kind == Violation::Kind::utilization) {
      out.push_back({{"kind", "utilization"},
                     {"instance", v.instance},
                     {"dimension", dimension_name(v.dimension)},
                     {"utilization", v.value},
                     {"limit", v.limit},
                     {"message", v.message}});
    } else {
      out.push_back({{"kind", "rate_cap"},
                     {"stream_id", v.stream_id},
                     {"desired_rate_fps", v.value},
                     {"max_rate_fps", v.limit},
                     {"message", v.message}});
    }
  }
  return out;
}

}  // namespace camplan
