#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "camplan/catalog.hpp"
#include "camplan/money.hpp"
#include "camplan/packing.hpp"
#include "camplan/profiles.hpp"
#include "camplan/solver.hpp"

namespace camplan {

struct StreamRequest {
  std::string stream_id;
  std::string program;
  FrameSize frame_size;
  double desired_rate = 0.0;
  int replicas = 1;
};

using Workload = std::vector<StreamRequest>;

/// A single analyzed camera feed after replica expansion.
struct StreamRef {
  std::string id;
  std::size_t request = 0;  // index into the workload
};

/// Replicas of "zf" become "zf#0", "zf#1", ...; single streams keep their id.
std::vector<StreamRef> expand_workload(const Workload& workload);

/// ST1 = instances without GPUs, ST2 = instances with GPUs, ST3 = all.
enum class Strategy { st1, st2, st3 };
inline constexpr std::array<Strategy, 3> kAllStrategies{Strategy::st1, Strategy::st2,
                                                         Strategy::st3};

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);
bool allows(Strategy strategy, const InstanceType& type);

inline constexpr double kDefaultHeadroom = 0.9;

/// Choice ids produced by build_instance.
inline constexpr std::string_view kCpuChoice = "cpu";
std::string gpu_choice_id(std::size_t slot);
/// Maps a choice id back to a GPU slot (nullopt for "cpu").
std::optional<std::size_t> parse_device_id(std::string_view id);
std::string device_id(std::optional<std::size_t> gpu_slot);

/// Encodes the workload as a packing instance. Bin types are the allowed
/// instance types with capacity scaled by `headroom`; every stream gets a
/// cpu choice and one choice per GPU slot, minus those that break a rate
/// cap or fit no bin type. Throws InfeasibleError naming the stream when
/// nothing survives.
PackingInstance build_instance(const Workload& workload, const Catalog& catalog,
                               const ProfileStore& profiles, Strategy strategy,
                               double headroom = kDefaultHeadroom);

struct PlannedInstance {
  std::string type;
  std::size_t ordinal = 0;
};

struct Assignment {
  std::string stream_id;
  std::size_t instance = 0;
  std::optional<std::size_t> gpu_slot;
};

struct Plan {
  std::vector<PlannedInstance> instances;
  std::vector<Assignment> assignments;
  Money hourly_cost;
  bool optimal = false;
};

/// Throws ContractError if the solution does not verify. Instance ordinals
/// are ordered by type name, then by solver ordinal.
Plan solution_to_plan(const PackingInstance& instance, const Solution& solution);
Solution plan_to_solution(const PackingInstance& instance, const Plan& plan);

Plan plan_workload(const Workload& workload, const Catalog& catalog, const ProfileStore& profiles,
                   Strategy strategy, double headroom = kDefaultHeadroom,
                   const SolverLimits& limits = {});

struct StrategyOutcome {
  Strategy strategy = Strategy::st3;
  std::optional<Plan> plan;
  std::string failure;  // set when plan is empty
  std::size_t non_gpu_instances = 0;
  std::size_t gpu_instances = 0;
  std::optional<int> savings_percent;
};

/// 1 - cost/worst as a whole percent, rounded half up.
int savings_percent(Money cost, Money worst);

/// Plans the workload under every strategy. Infeasible strategies are
/// reported as rows, not errors.
std::vector<StrategyOutcome> compare_strategies(const Workload& workload, const Catalog& catalog,
                                                const ProfileStore& profiles,
                                                double headroom = kDefaultHeadroom,
                                                const SolverLimits& limits = {});

Workload load_workload(const nlohmann::json& doc);
Workload load_workload_file(const std::filesystem::path& path);
nlohmann::json workload_to_json(const Workload& workload);

nlohmann::json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& doc);

nlohmann::json comparison_to_json(const std::vector<StrategyOutcome>& rows,
                                  const Catalog& catalog);

}  // namespace camplan
