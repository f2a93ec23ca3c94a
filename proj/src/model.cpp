#include "camplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "camplan/error.hpp"
#include "json_util.hpp"

namespace camplan {

using nlohmann::json;

namespace {

std::string format_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", rate);
  return buf;
}

void validate_workload(const Workload& workload) {
  std::set<std::string, std::less<>> ids;
  for (const auto& s : workload) {
    if (s.stream_id.empty()) throw ValidationError("stream id must not be empty");
    if (!ids.insert(s.stream_id).second) throw ValidationError("duplicate stream id '" + s.stream_id + "'");
    if (!std::isfinite(s.desired_rate) || s.desired_rate <= 0.0) {
      throw ValidationError(s.stream_id + ": desired rate must be > 0");
    }
    if (s.replicas < 1) throw ValidationError(s.stream_id + ": replicas must be >= 1");
  }
}

bool fits_any(const ResourceVector& demand, const std::vector<BinType>& bins) {
  return std::any_of(bins.begin(), bins.end(), [&](const BinType& b) {
    for (std::size_t d = 0; d < demand.size(); ++d) {
      if (demand[d] > b.capacity[d] + kCapacitySlack) return false;
    }
    return true;
  });
}

}  // namespace

std::vector<StreamRef> expand_workload(const Workload& workload) {
  std::vector<StreamRef> out;
  for (std::size_t r = 0; r < workload.size(); ++r) {
    const auto& s = workload[r];
    if (s.replicas == 1) {
      out.push_back({s.stream_id, r});
      continue;
    }
    for (int k = 0; k < s.replicas; ++k) out.push_back({s.stream_id + "#" + std::to_string(k), r});
  }
  return out;
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::st1: return "ST1";
    case Strategy::st2: return "ST2";
    case Strategy::st3: return "ST3";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "st1" || text == "ST1") return Strategy::st1;
  if (text == "st2" || text == "ST2") return Strategy::st2;
  if (text == "st3" || text == "ST3") return Strategy::st3;
  throw ParseError("unknown strategy '" + std::string(text) + "' (expected st1, st2 or st3)");
}

bool allows(Strategy strategy, const InstanceType& type) {
  switch (strategy) {
    case Strategy::st1: return !type.has_gpu();
    case Strategy::st2: return type.has_gpu();
    case Strategy::st3: return true;
  }
  return false;
}

std::string gpu_choice_id(std::size_t slot) { return "gpu" + std::to_string(slot); }

std::optional<std::size_t> parse_device_id(std::string_view id) {
  if (id == kCpuChoice) return std::nullopt;
  if (id.size() > 3 && id.substr(0, 3) == "gpu" &&
      std::all_of(id.begin() + 3, id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return static_cast<std::size_t>(std::stoul(std::string(id.substr(3))));
  }
  throw ParseError("unknown device '" + std::string(id) + "' (expected cpu or gpuN)");
}

std::string device_id(std::optional<std::size_t> gpu_slot) {
  return gpu_slot ? gpu_choice_id(*gpu_slot) : std::string(kCpuChoice);
}

PackingInstance build_instance(const Workload& workload, const Catalog& catalog,
                               const ProfileStore& profiles, Strategy strategy, double headroom) {
  if (!(headroom > 0.0 && headroom <= 1.0)) {
    throw ValidationError("headroom must be in (0, 1], got " + std::to_string(headroom));
  }
  validate_workload(workload);

  const std::size_t n_max = catalog.n_max();
  PackingInstance inst;
  inst.dims = dims_for_gpus(n_max);
  if (n_max > 0) inst.slots = SlotLayout{2, 2, n_max};

  bool any_gpu_bin = false;
  for (const auto& t : catalog.types()) {
    if (!allows(strategy, t)) continue;
    inst.bin_types.push_back({t.name, capacity_vector(t, n_max).scaled(headroom), t.hourly_cost});
    any_gpu_bin = any_gpu_bin || t.has_gpu();
  }
  if (inst.bin_types.empty()) {
    throw InfeasibleError("", "strategy " + std::string(to_string(strategy)) +
                                  " allows no instance type in the catalog");
  }

  for (const auto& ref : expand_workload(workload)) {
    const auto& req = workload[ref.request];
    const Profile* cpu = profiles.find(req.program, req.frame_size, Device::cpu_only);
    const Profile* gpu = profiles.find(req.program, req.frame_size, Device::gpu_assisted);
    if (!cpu && !gpu) {
      throw ValidationError(ref.id + ": no profile for program " + req.program + " at " +
                            to_string(req.frame_size));
    }

    Item item{ref.id, {}};
    std::vector<std::string> reasons;
    const std::string desired = req.program + " desired " + format_rate(req.desired_rate) + " FPS";
    if (cpu) {
      if (!rate_feasible(*cpu, req.desired_rate)) {
        reasons.push_back(desired + " > cpu max " + format_rate(*cpu->max_rate));
      } else if (auto demand = demand_vector(*cpu, req.desired_rate, n_max, std::nullopt);
                 fits_any(demand, inst.bin_types)) {
        item.choices.push_back({std::string(kCpuChoice), std::move(demand)});
      } else {
        reasons.push_back("cpu demand exceeds every allowed instance's capacity");
      }
    }
    if (gpu) {
      if (!rate_feasible(*gpu, req.desired_rate)) {
        reasons.push_back(desired + " > gpu max " + format_rate(*gpu->max_rate));
      } else if (!any_gpu_bin) {
        reasons.push_back("no allowed instance type has a GPU");
      } else {
        bool any = false;
        for (std::size_t g = 0; g < n_max; ++g) {
          auto demand = demand_vector(*gpu, req.desired_rate, n_max, g);
          if (!fits_any(demand, inst.bin_types)) continue;
          item.choices.push_back({gpu_choice_id(g), std::move(demand)});
          any = true;
        }
        if (!any) reasons.push_back("gpu demand exceeds every allowed instance's capacity");
      }
    }
    if (item.choices.empty()) {
      std::string reason = "no feasible choice: ";
      for (std::size_t k = 0; k < reasons.size(); ++k) reason += (k ? "; " : "") + reasons[k];
      throw InfeasibleError(ref.id, reason);
    }
    inst.items.push_back(std::move(item));
  }
  inst.validate();
  return inst;
}

Plan solution_to_plan(const PackingInstance& instance, const Solution& solution) {
  if (!verify(instance, solution)) throw ContractError("solution does not satisfy the packing instance");

  std::vector<std::size_t> by_name(solution.opened_bins.size());
  for (std::size_t b = 0; b < by_name.size(); ++b) by_name[b] = b;
  std::stable_sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) {
    return instance.bin_types[solution.opened_bins[a]].name <
           instance.bin_types[solution.opened_bins[b]].name;
  });
  std::vector<std::size_t> ordinal(by_name.size());
  Plan plan;
  for (std::size_t k = 0; k < by_name.size(); ++k) {
    ordinal[by_name[k]] = k;
    plan.instances.push_back({instance.bin_types[solution.opened_bins[by_name[k]]].name, k});
  }

  std::vector<ItemPlacement> placement = solution.placement;
  std::sort(placement.begin(), placement.end(),
            [](const ItemPlacement& a, const ItemPlacement& b) { return a.item < b.item; });
  for (const auto& p : placement) {
    const auto& item = instance.items[p.item];
    plan.assignments.push_back(
        {item.id, ordinal[p.bin], parse_device_id(item.choices[p.choice].id)});
  }
  plan.hourly_cost = solution.total_cost;
  plan.optimal = solution.optimal;
  return plan;
}

Solution plan_to_solution(const PackingInstance& instance, const Plan& plan) {
  std::map<std::size_t, std::size_t> bin_of_ordinal;
  Solution s;
  for (const auto& pi : plan.instances) {
    auto it = std::find_if(instance.bin_types.begin(), instance.bin_types.end(),
                           [&](const BinType& b) { return b.name == pi.type; });
    if (it == instance.bin_types.end()) {
      throw ContractError("plan uses instance type " + pi.type + " which the instance does not allow");
    }
    if (!bin_of_ordinal.emplace(pi.ordinal, s.opened_bins.size()).second) {
      throw ContractError("plan repeats instance ordinal " + std::to_string(pi.ordinal));
    }
    s.opened_bins.push_back(static_cast<std::size_t>(it - instance.bin_types.begin()));
  }

  std::map<std::string, std::size_t, std::less<>> item_of;
  for (std::size_t i = 0; i < instance.items.size(); ++i) item_of.emplace(instance.items[i].id, i);
  std::vector<bool> seen(instance.items.size(), false);
  for (const auto& a : plan.assignments) {
    auto item = item_of.find(a.stream_id);
    if (item == item_of.end()) throw ContractError("plan assigns unknown stream " + a.stream_id);
    if (seen[item->second]) throw ContractError("plan assigns stream " + a.stream_id + " twice");
    seen[item->second] = true;
    auto bin = bin_of_ordinal.find(a.instance);
    if (bin == bin_of_ordinal.end()) {
      throw ContractError(a.stream_id + " references missing instance " + std::to_string(a.instance));
    }
    const auto& choices = instance.items[item->second].choices;
    const std::string want = device_id(a.gpu_slot);
    auto c = std::find_if(choices.begin(), choices.end(), [&](const Choice& ch) { return ch.id == want; });
    if (c == choices.end()) {
      throw ContractError(a.stream_id + ": device " + want + " is not a feasible choice");
    }
    s.placement.push_back({item->second, bin->second, static_cast<std::size_t>(c - choices.begin())});
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ContractError("plan leaves some streams unassigned");
  }
  std::sort(s.placement.begin(), s.placement.end(),
            [](const ItemPlacement& a, const ItemPlacement& b) { return a.item < b.item; });
  s.total_cost = Money{};
  for (std::size_t t : s.opened_bins) s.total_cost += instance.bin_types[t].cost;
  if (s.total_cost != plan.hourly_cost) {
    throw ContractError("plan cost $" + plan.hourly_cost.str() + " does not match its instances ($" +
                        s.total_cost.str() + ")");
  }
  if (!verify(instance, s)) throw ContractError("plan overloads an instance");
  s.optimal = plan.optimal;
  return s;
}

Plan plan_workload(const Workload& workload, const Catalog& catalog, const ProfileStore& profiles,
                   Strategy strategy, double headroom, const SolverLimits& limits) {
  const PackingInstance inst = build_instance(workload, catalog, profiles, strategy, headroom);
  return solution_to_plan(inst, solve_exact(inst, limits));
}

int savings_percent(Money cost, Money worst) {
  if (worst.millis() <= 0) return 0;
  const long long saved = worst.millis() - cost.millis();
  return static_cast<int>((200 * saved + worst.millis()) / (2 * worst.millis()));
}

std::vector<StrategyOutcome> compare_strategies(const Workload& workload, const Catalog& catalog,
                                                const ProfileStore& profiles, double headroom,
                                                const SolverLimits& limits) {
  std::vector<StrategyOutcome> rows;
  std::optional<Money> worst;
  for (Strategy st : kAllStrategies) {
    StrategyOutcome row;
    row.strategy = st;
    try {
      row.plan = plan_workload(workload, catalog, profiles, st, headroom, limits);
    } catch (const InfeasibleError& e) {
      row.failure = e.what();
      rows.push_back(std::move(row));
      continue;
    }
    for (const auto& pi : row.plan->instances) {
      const InstanceType* t = catalog.find(pi.type);
      (t && t->has_gpu() ? row.gpu_instances : row.non_gpu_instances) += 1;
    }
    worst = std::max(worst.value_or(Money{}), row.plan->hourly_cost);
    rows.push_back(std::move(row));
  }
  for (auto& row : rows) {
    if (row.plan) row.savings_percent = savings_percent(row.plan->hourly_cost, *worst);
  }
  return rows;
}

// --- JSON ------------------------------------------------------------------

Workload load_workload(const json& doc) {
  const json& list = detail::list_or_member(doc, "streams", "workload");
  Workload w;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = detail::index_path("streams", i);
    detail::require_object(list[i], p);
    StreamRequest s;
    s.stream_id = detail::get_string(list[i], "stream_id", p);
    s.program = detail::get_string(list[i], "program", p);
    const json& fs = detail::require_field(list[i], "frame_size", p);
    const std::string fp = detail::field_path(p, "frame_size");
    if (fs.is_string()) {
      s.frame_size = parse_frame_size(fs.get<std::string>());
    } else {
      s.frame_size = {static_cast<int>(detail::get_integer(fs, "w", fp)),
                      static_cast<int>(detail::get_integer(fs, "h", fp))};
    }
    s.desired_rate = detail::get_number(list[i], "desired_rate_fps", p);
    s.replicas = list[i].contains("replicas")
                     ? static_cast<int>(detail::get_integer(list[i], "replicas", p))
                     : 1;
    w.push_back(std::move(s));
  }
  validate_workload(w);
  return w;
}

Workload load_workload_file(const std::filesystem::path& path) {
  return load_workload(detail::read_json_file(path));
}

json workload_to_json(const Workload& workload) {
  json list = json::array();
  for (const auto& s : workload) {
    list.push_back({{"stream_id", s.stream_id},
                    {"program", s.program},
                    {"frame_size", {{"w", s.frame_size.width}, {"h", s.frame_size.height}}},
                    {"desired_rate_fps", s.desired_rate},
                    {"replicas", s.replicas}});
  }
  return {{"streams", list}};
}

json plan_to_json(const Plan& plan) {
  json instances = json::array();
  for (const auto& pi : plan.instances) instances.push_back({{"type", pi.type}, {"ordinal", pi.ordinal}});
  json assignments = json::array();
  for (const auto& a : plan.assignments) {
    assignments.push_back(
        {{"stream_id", a.stream_id}, {"instance", a.instance}, {"device", device_id(a.gpu_slot)}});
  }
  return {{"instances", instances},
          {"assignments", assignments},
          {"hourly_cost", plan.hourly_cost.str()},
          {"optimal", plan.optimal}};
}

Plan plan_from_json(const json& doc) {
  const std::string root = "plan";
  detail::require_object(doc, root);
  Plan plan;
  const json& instances = detail::require_array(detail::require_field(doc, "instances", root), "instances");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::string p = detail::index_path("instances", i);
    long long ordinal = detail::get_integer(instances[i], "ordinal", p);
    if (ordinal < 0) throw ParseError(detail::field_path(p, "ordinal") + ": must be >= 0");
    plan.instances.push_back({detail::get_string(instances[i], "type", p),
                              static_cast<std::size_t>(ordinal)});
  }
  const json& assignments =
      detail::require_array(detail::require_field(doc, "assignments", root), "assignments");
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const std::string p = detail::index_path("assignments", i);
    long long inst = detail::get_integer(assignments[i], "instance", p);
    if (inst < 0) throw ParseError(detail::field_path(p, "instance") + ": must be >= 0");
    Assignment a;
    a.stream_id = detail::get_string(assignments[i], "stream_id", p);
    a.instance = static_cast<std::size_t>(inst);
    try {
      a.gpu_slot = parse_device_id(detail::get_string(assignments[i], "device", p));
    } catch (const ParseError& e) {
      throw ParseError(detail::field_path(p, "device") + ": " + e.what());
    }
    plan.assignments.push_back(std::move(a));
  }
  const json& cost = detail::require_field(doc, "hourly_cost", root);
  try {
    plan.hourly_cost = cost.is_string() ? Money::parse(cost.get<std::string>())
                                        : Money::from_dollars(detail::get_number(doc, "hourly_cost", root));
  } catch (const ParseError& e) {
    throw ParseError(std::string("hourly_cost: ") + e.what());
  }
  if (auto it = doc.find("optimal"); it != doc.end() && it->is_boolean()) plan.optimal = it->get<bool>();
  return plan;
}

json comparison_to_json(const std::vector<StrategyOutcome>& rows, const Catalog& catalog) {
  json out = json::array();
  for (const auto& row : rows) {
    json r{{"strategy", to_string(row.strategy)}};
    if (!row.plan) {
      r["status"] = "fail";
      r["failure"] = row.failure;
      out.push_back(std::move(r));
      continue;
    }
    json by_type = json::object();
    for (const auto& t : catalog.types()) {
      auto n = std::count_if(row.plan->instances.begin(), row.plan->instances.end(),
                             [&](const PlannedInstance& pi) { return pi.type == t.name; });
      if (n > 0) by_type[t.name] = n;
    }
    r["status"] = "ok";
    r["instances"] = by_type;
    r["non_gpu_instances"] = row.non_gpu_instances;
    r["gpu_instances"] = row.gpu_instances;
    r["hourly_cost"] = row.plan->hourly_cost.str();
    r["savings_percent"] = row.savings_percent.value_or(0);
    r["plan"] = plan_to_json(*row.plan);
    out.push_back(std::move(r));
  }
  return {{"rows", out}};
}

}  // namespace camplan
