#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "camplan/error.hpp"
#include "camplan/solver.hpp"
#include "common.hpp"

namespace camplan {
namespace {

struct BlockBest {
  Money cost;
  std::size_t type = 0;
  std::vector<std::size_t> choices;  // per member, in increasing item order
};

// Cheapest bin type that holds every item of `mask` under some choice combination.
std::optional<BlockBest> best_for_block(const PackingInstance& instance, std::uint32_t mask) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    if (mask & (1u << i)) members.push_back(i);
  }
  std::optional<BlockBest> best;
  for (std::size_t t = 0; t < instance.bin_types.size(); ++t) {
    const auto& type = instance.bin_types[t];
    if (best && best->cost <= type.cost) continue;
    std::vector<std::size_t> pick(members.size(), 0);
    while (true) {
      std::vector<double> load(instance.dims, 0.0);
      for (std::size_t m = 0; m < members.size(); ++m) {
        const auto& demand = instance.items[members[m]].choices[pick[m]].demand;
        for (std::size_t d = 0; d < instance.dims; ++d) load[d] += demand[d];
      }
      bool ok = true;
      for (std::size_t d = 0; d < instance.dims; ++d) {
        if (load[d] > type.capacity[d] + kCapacitySlack) ok = false;
      }
      if (ok) {
        best = BlockBest{type.cost, t, pick};
        break;
      }
      std::size_t m = 0;
      while (m < members.size() && ++pick[m] == instance.items[members[m]].choices.size()) {
        pick[m++] = 0;
      }
      if (m == members.size()) break;
    }
  }
  return best;
}

}  // namespace

Solution brute_force(const PackingInstance& instance) {
  instance.validate();
  const std::size_t n = instance.items.size();
  if (n > kBruteForceMaxItems) {
    throw RefusalError("brute force handles at most " + std::to_string(kBruteForceMaxItems) +
                       " items, got " + std::to_string(n));
  }
  for (const auto& item : instance.items) {
    if (item.choices.size() > kBruteForceMaxChoices) {
      throw RefusalError("brute force handles at most " + std::to_string(kBruteForceMaxChoices) +
                         " choices per item; " + item.id + " has " +
                         std::to_string(item.choices.size()));
    }
  }
  if (n == 0) return Solution{{}, {}, Money{}, true};

  std::vector<std::optional<BlockBest>> block(std::size_t{1} << n);
  for (std::uint32_t mask = 1; mask < block.size(); ++mask) block[mask] = best_for_block(instance, mask);

  // Enumerate set partitions as restricted growth strings.
  std::vector<std::size_t> label(n, 0);
  std::optional<Solution> best;
  while (true) {
    std::size_t blocks = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::uint32_t> masks(blocks, 0);
    for (std::size_t i = 0; i < n; ++i) masks[label[i]] |= 1u << i;

    bool feasible = true;
    Money cost;
    for (auto m : masks) {
      if (!block[m]) {
        feasible = false;
        break;
      }
      cost += block[m]->cost;
    }
    if (feasible && (!best || cost < best->total_cost ||
                     (cost == best->total_cost && blocks < best->opened_bins.size()))) {
      Solution s;
      s.total_cost = cost;
      s.optimal = true;
      s.placement.resize(n);
      for (std::size_t b = 0; b < blocks; ++b) {
        const auto& bb = *block[masks[b]];
        s.opened_bins.push_back(bb.type);
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (masks[b] & (1u << i)) s.placement[i] = {i, b, bb.choices[m++]};
        }
      }
      best = std::move(s);
    }

    // Next restricted growth string.
    std::size_t i = n - 1;
    while (i > 0) {
      std::size_t prefix_max = *std::max_element(label.begin(), label.begin() + i);
      if (label[i] <= prefix_max) {
        ++label[i];
        std::fill(label.begin() + i + 1, label.end(), 0);
        break;
      }
      --i;
    }
    if (i == 0) break;
  }

  if (!best) {
    detail::require_placeable(instance);
    throw InfeasibleError("", "no feasible packing");
  }
  if (!verify(instance, *best)) throw std::logic_error("brute force produced an infeasible packing");
  return *best;
}

}  // namespace camplan
