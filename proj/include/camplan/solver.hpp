#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "camplan/money.hpp"
#include "camplan/packing.hpp"

namespace camplan {

/// Absolute slack, in resource units, allowed on every capacity comparison.
inline constexpr double kCapacitySlack = 1e-6;

struct ItemPlacement {
  std::size_t item = 0;    // index into PackingInstance::items
  std::size_t bin = 0;     // ordinal into Solution::opened_bins
  std::size_t choice = 0;  // index into Item::choices

  friend bool operator==(const ItemPlacement&, const ItemPlacement&) = default;
};

struct Solution {
  std::vector<std::size_t> opened_bins;  // bin type index per ordinal
  std::vector<ItemPlacement> placement;  // one entry per item, sorted by item
  Money total_cost;
  bool optimal = false;
};

struct SolverLimits {
  std::uint64_t max_nodes = 10'000'000;
  double time_budget_s = 60.0;
  bool optimality_required = false;
};

struct SolverStats {
  std::uint64_t nodes = 0;
  std::uint64_t incumbent_updates = 0;
  bool limits_hit = false;
};

/// Items placed so far. Items without an entry in `placement` are pending.
struct PartialAssignment {
  std::vector<std::size_t> opened_bins;
  std::vector<ItemPlacement> placement;
};

/// Multiple-choice best-fit-decreasing. Always feasible, never flagged optimal.
/// Throws InfeasibleError if some item fits no bin type.
Solution solve_heuristic(const PackingInstance& instance);

/// Depth-first branch-and-bound seeded by solve_heuristic. Returns a proven
/// optimum, or the best incumbent with optimal=false when limits run out
/// (ResourceExhaustedError instead if limits.optimality_required).
Solution solve_exact(const PackingInstance& instance, const SolverLimits& limits = {},
                     SolverStats* stats = nullptr, std::ostream* trace = nullptr);

/// Admissible cost bound, in dollars, for completing `partial`.
double lower_bound(const PackingInstance& instance, const PartialAssignment& partial);
double lower_bound(const PackingInstance& instance);

/// Exhaustive optimum over all set partitions of the items. Refuses
/// instances with more than 6 items or more than 3 choices per item.
Solution brute_force(const PackingInstance& instance);

inline constexpr std::size_t kBruteForceMaxItems = 6;
inline constexpr std::size_t kBruteForceMaxChoices = 3;

/// True iff every item is placed once on an opened bin, every bin respects
/// its capacity within kCapacitySlack, and total_cost matches.
bool verify(const PackingInstance& instance, const Solution& solution);

nlohmann::json solution_to_json(const Solution& solution);

}  // namespace camplan
