#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "camplan/error.hpp"

namespace camplan::detail {

bool fits(std::span<const double> load, std::span<const double> demand,
          std::span<const double> capacity) {
  for (std::size_t d = 0; d < demand.size(); ++d) {
    if (load[d] + demand[d] > capacity[d] + kCapacitySlack) return false;
  }
  return true;
}

double footprint(std::span<const double> demand, std::span<const double> capacity) {
  double worst = 0.0;
  for (std::size_t d = 0; d < demand.size(); ++d) {
    if (demand[d] == 0.0) continue;
    if (capacity[d] <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, demand[d] / capacity[d]);
  }
  return worst;
}

BoundData make_bound_data(const PackingInstance& instance) {
  BoundData data;
  data.millis_per_unit.assign(instance.dims, 0.0);
  for (std::size_t d = 0; d < instance.dims; ++d) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : instance.bin_types) {
      if (b.capacity[d] > 0.0) {
        best = std::min(best, static_cast<double>(b.cost.millis()) / b.capacity[d]);
      }
    }
    data.millis_per_unit[d] = std::isfinite(best) ? best : 0.0;
  }
  for (const auto& item : instance.items) {
    std::vector<double> low(instance.dims, std::numeric_limits<double>::infinity());
    for (const auto& c : item.choices) {
      for (std::size_t d = 0; d < instance.dims; ++d) low[d] = std::min(low[d], c.demand[d]);
    }
    if (item.choices.empty()) low.assign(instance.dims, 0.0);
    data.min_demand.push_back(std::move(low));
  }
  return data;
}

double bound_millis(double committed_millis, std::span<const double> remaining,
                    std::span<const double> residual, const BoundData& data) {
  double extra = 0.0;
  for (std::size_t d = 0; d < remaining.size(); ++d) {
    double deficit = remaining[d] - residual[d];
    if (deficit > 0.0) extra = std::max(extra, deficit * data.millis_per_unit[d]);
  }
  return committed_millis + extra;
}

long long bound_ceiling(double bound_millis) {
  // Costs are whole millis; the small offset absorbs the capacity slack.
  return static_cast<long long>(std::ceil(bound_millis - 1e-3));
}

bool identical_items(const Item& a, const Item& b) {
  if (a.choices.size() != b.choices.size()) return false;
  for (std::size_t c = 0; c < a.choices.size(); ++c) {
    if (!(a.choices[c].demand == b.choices[c].demand)) return false;
  }
  return true;
}

std::vector<std::size_t> decreasing_order(const PackingInstance& instance) {
  const std::size_t n = instance.items.size();
  std::vector<double> key(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : instance.items[i].choices) {
      const BinType* cheapest = nullptr;
      for (const auto& b : instance.bin_types) {
        if (!fits(std::vector<double>(instance.dims, 0.0), c.demand.values(), b.capacity.values())) {
          continue;
        }
        if (!cheapest || b.cost < cheapest->cost) cheapest = &b;
      }
      if (cheapest) key[i] = std::max(key[i], footprint(c.demand.values(), cheapest->capacity.values()));
    }
  }
  std::vector<std::size_t> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = i;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });

  std::vector<std::size_t> order;
  std::vector<bool> taken(n, false);
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::size_t i = sorted[pos];
    if (taken[i]) continue;
    order.push_back(i);
    taken[i] = true;
    for (std::size_t later = pos + 1; later < n; ++later) {
      std::size_t j = sorted[later];
      if (!taken[j] && identical_items(instance.items[i], instance.items[j])) {
        order.push_back(j);
        taken[j] = true;
      }
    }
  }
  return order;
}

void require_placeable(const PackingInstance& instance) {
  const std::vector<double> empty(instance.dims, 0.0);
  for (const auto& item : instance.items) {
    if (item.choices.empty()) throw InfeasibleError(item.id, "no choices");
    bool ok = false;
    for (const auto& c : item.choices) {
      for (const auto& b : instance.bin_types) {
        if (fits(empty, c.demand.values(), b.capacity.values())) {
          ok = true;
          break;
        }
      }
      if (ok) break;
    }
    if (!ok) throw InfeasibleError(item.id, "no choice fits any bin type");
  }
}

Money cost_of(const PackingInstance& instance, std::span<const std::size_t> opened_bins) {
  Money total;
  for (std::size_t t : opened_bins) total += instance.bin_types[t].cost;
  return total;
}

}  // namespace camplan::detail
