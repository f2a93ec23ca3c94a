#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "camplan/packing.hpp"
#include "camplan/solver.hpp"

namespace camplan::detail {

/// load + demand <= capacity + kCapacitySlack in every dimension.
bool fits(std::span<const double> load, std::span<const double> demand,
          std::span<const double> capacity);

/// Largest demand/capacity ratio; infinite when demand needs a dimension
/// the bin lacks.
double footprint(std::span<const double> demand, std::span<const double> capacity);

/// Inputs of the cost lower bound that do not change during a search.
struct BoundData {
  std::vector<double> millis_per_unit;              // per dimension; 0 if no bin has capacity
  std::vector<std::vector<double>> min_demand;      // per item, per dimension
};

BoundData make_bound_data(const PackingInstance& instance);

/// committed + max_d max(0, remaining_d - residual_d) * millis_per_unit_d,
/// in thousandths of a dollar.
double bound_millis(double committed_millis, std::span<const double> remaining,
                    std::span<const double> residual, const BoundData& data);

/// Smallest integer cost (millis) a completion can reach given a bound.
long long bound_ceiling(double bound_millis);

/// Items sorted by decreasing max-over-choices normalized demand, each
/// measured against the cheapest bin type that fits the choice. Identical
/// items are pulled together behind their first occurrence.
std::vector<std::size_t> decreasing_order(const PackingInstance& instance);

/// True when two items have equal demand vectors in the same choice order.
bool identical_items(const Item& a, const Item& b);

/// Throws InfeasibleError for the first item no bin type can hold.
void require_placeable(const PackingInstance& instance);

Money cost_of(const PackingInstance& instance, std::span<const std::size_t> opened_bins);

}  // namespace camplan::detail
