#include <vector>

#include "camplan/solver.hpp"
#include "common.hpp"

namespace camplan {

bool verify(const PackingInstance& instance, const Solution& solution) {
  const std::size_t n = instance.items.size();
  if (solution.placement.size() != n) return false;
  for (std::size_t t : solution.opened_bins) {
    if (t >= instance.bin_types.size()) return false;
  }

  std::vector<bool> seen(n, false);
  std::vector<std::vector<double>> load(solution.opened_bins.size(),
                                        std::vector<double>(instance.dims, 0.0));
  for (const auto& p : solution.placement) {
    if (p.item >= n || seen[p.item]) return false;
    seen[p.item] = true;
    if (p.bin >= solution.opened_bins.size()) return false;
    const auto& choices = instance.items[p.item].choices;
    if (p.choice >= choices.size()) return false;
    const auto& demand = choices[p.choice].demand;
    if (demand.size() != instance.dims) return false;
    for (std::size_t d = 0; d < instance.dims; ++d) load[p.bin][d] += demand[d];
  }

  for (std::size_t b = 0; b < solution.opened_bins.size(); ++b) {
    const auto& cap = instance.bin_types[solution.opened_bins[b]].capacity;
    for (std::size_t d = 0; d < instance.dims; ++d) {
      if (load[b][d] > cap[d] + kCapacitySlack) return false;
    }
  }
  return solution.total_cost == detail::cost_of(instance, solution.opened_bins);
}

double lower_bound(const PackingInstance& instance, const PartialAssignment& partial) {
  const auto data = detail::make_bound_data(instance);
  std::vector<double> remaining(instance.dims, 0.0);
  std::vector<bool> placed(instance.items.size(), false);
  std::vector<std::vector<double>> load(partial.opened_bins.size(),
                                        std::vector<double>(instance.dims, 0.0));
  for (const auto& p : partial.placement) {
    placed.at(p.item) = true;
    const auto& demand = instance.items[p.item].choices.at(p.choice).demand;
    for (std::size_t d = 0; d < instance.dims; ++d) load.at(p.bin)[d] += demand[d];
  }
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    if (placed[i]) continue;
    for (std::size_t d = 0; d < instance.dims; ++d) remaining[d] += data.min_demand[i][d];
  }
  std::vector<double> residual(instance.dims, 0.0);
  for (std::size_t b = 0; b < partial.opened_bins.size(); ++b) {
    const auto& cap = instance.bin_types.at(partial.opened_bins[b]).capacity;
    for (std::size_t d = 0; d < instance.dims; ++d) {
      residual[d] += std::max(0.0, cap[d] - load[b][d]);
    }
  }
  const double committed =
      static_cast<double>(detail::cost_of(instance, partial.opened_bins).millis());
  return detail::bound_millis(committed, remaining, residual, data) / 1000.0;
}

double lower_bound(const PackingInstance& instance) { return lower_bound(instance, {}); }

nlohmann::json solution_to_json(const Solution& solution) {
  nlohmann::json placement = nlohmann::json::array();
  for (const auto& p : solution.placement) {
    placement.push_back({{"item", p.item}, {"bin", p.bin}, {"choice", p.choice}});
  }
  return {{"opened_bins", solution.opened_bins},
          {"placement", placement},
          {"total_cost", solution.total_cost.str()},
          {"optimal", solution.optimal}};
}

}  // namespace camplan
