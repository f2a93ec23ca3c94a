#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "camplan/error.hpp"
#include "camplan/solver.hpp"
#include "common.hpp"

namespace camplan {

Solution solve_heuristic(const PackingInstance& instance) {
  instance.validate();
  detail::require_placeable(instance);

  struct OpenBin {
    std::size_t type;
    std::vector<double> load;
  };
  std::vector<OpenBin> bins;
  Solution solution;
  const std::vector<double> empty(instance.dims, 0.0);

  for (std::size_t i : detail::decreasing_order(instance)) {
    const auto& item = instance.items[i];

    // Existing bins cost nothing extra: pick the smallest footprint, then the
    // tightest resulting fill.
    bool found = false;
    std::tuple<double, double> best{};
    ItemPlacement chosen{i, 0, 0};
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const auto& cap = instance.bin_types[bins[b].type].capacity.values();
      for (std::size_t c = 0; c < item.choices.size(); ++c) {
        const auto& demand = item.choices[c].demand.values();
        if (!detail::fits(bins[b].load, demand, cap)) continue;
        std::vector<double> after = bins[b].load;
        for (std::size_t d = 0; d < instance.dims; ++d) after[d] += demand[d];
        std::tuple<double, double> score{detail::footprint(demand, cap),
                                         -detail::footprint(after, cap)};
        if (!found || score < best) {
          found = true;
          best = score;
          chosen = {i, b, c};
        }
      }
    }

    if (!found) {
      // Open the type whose share of cost consumed by this item is lowest.
      std::tuple<double, Money> best_new{};
      std::size_t best_type = 0;
      for (std::size_t t = 0; t < instance.bin_types.size(); ++t) {
        const auto& type = instance.bin_types[t];
        for (std::size_t c = 0; c < item.choices.size(); ++c) {
          const auto& demand = item.choices[c].demand.values();
          if (!detail::fits(empty, demand, type.capacity.values())) continue;
          std::tuple<double, Money> score{
              static_cast<double>(type.cost.millis()) * detail::footprint(demand, type.capacity.values()),
              type.cost};
          if (!found || score < best_new) {
            found = true;
            best_new = score;
            best_type = t;
            chosen = {i, bins.size(), c};
          }
        }
      }
      if (!found) throw InfeasibleError(item.id, "no choice fits any bin type");
      bins.push_back({best_type, empty});
      solution.opened_bins.push_back(best_type);
    }

    const auto& demand = item.choices[chosen.choice].demand;
    for (std::size_t d = 0; d < instance.dims; ++d) bins[chosen.bin].load[d] += demand[d];
    solution.placement.push_back(chosen);
  }

  std::sort(solution.placement.begin(), solution.placement.end(),
            [](const ItemPlacement& a, const ItemPlacement& b) { return a.item < b.item; });
  solution.total_cost = detail::cost_of(instance, solution.opened_bins);
  solution.optimal = false;
  if (!verify(instance, solution)) throw std::logic_error("heuristic produced an infeasible packing");
  return solution;
}

}  // namespace camplan
