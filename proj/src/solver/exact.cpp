#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "camplan/error.hpp"
#include "camplan/solver.hpp"
#include "common.hpp"

namespace camplan {
namespace {

// Precomputed GPU-slot symmetry: which choices are images of each other
// when two slots of one bin are swapped.
class SlotSymmetry {
 public:
  explicit SlotSymmetry(const PackingInstance& inst) : inst_(inst) {
    if (!inst.slots || inst.slots->count < 2 || inst.slots->width == 0) return;
    const auto& layout = *inst.slots;
    const std::size_t n_slots = layout.count;

    slot_of_.resize(inst.items.size());
    image_.resize(inst.items.size());
    std::vector<std::vector<bool>> closed(n_slots, std::vector<bool>(n_slots, true));
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      const auto& choices = inst.items[i].choices;
      slot_of_[i].resize(choices.size());
      image_[i].assign(choices.size(), std::vector<std::optional<std::size_t>>(n_slots));
      std::optional<std::size_t> last_slot;
      for (std::size_t c = 0; c < choices.size(); ++c) {
        std::size_t touched = 0;
        for (std::size_t s = 0; s < n_slots; ++s) {
          for (std::size_t w = 0; w < layout.width; ++w) {
            if (choices[c].demand[dim(s, w)] != 0.0) {
              if (!slot_of_[i][c] || *slot_of_[i][c] != s) ++touched;
              slot_of_[i][c] = s;
            }
          }
        }
        if (touched > 1) return;  // multi-slot choices: rule disabled
        if (slot_of_[i][c]) {
          if (last_slot && *slot_of_[i][c] <= *last_slot) return;  // slot order != choice order
          last_slot = slot_of_[i][c];
        }
        for (std::size_t a = 0; a < n_slots; ++a) {
          for (std::size_t b = a + 1; b < n_slots; ++b) {
            auto img = find_choice(i, swapped(choices[c].demand, a, b));
            if (!img) {
              closed[a][b] = closed[b][a] = false;
            } else if (slot_of_[i][c] == a) {
              image_[i][c][b] = img;
            } else if (slot_of_[i][c] == b) {
              image_[i][c][a] = img;
            }
          }
        }
      }
    }
    closed_ = std::move(closed);
    enabled_ = true;
  }

  // Choice `c` of `item` on a bin with the given capacity and load can be
  // skipped if a lower, interchangeable slot offers the mirrored choice.
  // Returns that mirrored choice.
  std::optional<std::size_t> lower_image(std::size_t item, std::size_t c,
                                         std::span<const double> capacity,
                                         std::span<const double> load) const {
    if (!enabled_ || !slot_of_[item][c]) return std::nullopt;
    const std::size_t s = *slot_of_[item][c];
    for (std::size_t s2 = 0; s2 < s; ++s2) {
      if (!closed_[s][s2] || !image_[item][c][s2]) continue;
      bool same = true;
      for (std::size_t w = 0; w < inst_.slots->width && same; ++w) {
        same = capacity[dim(s, w)] == capacity[dim(s2, w)] && load[dim(s, w)] == load[dim(s2, w)];
      }
      if (same) return image_[item][c][s2];
    }
    return std::nullopt;
  }

 private:
  std::size_t dim(std::size_t slot, std::size_t w) const {
    return inst_.slots->first_dim + slot * inst_.slots->width + w;
  }

  ResourceVector swapped(const ResourceVector& v, std::size_t a, std::size_t b) const {
    std::vector<double> out(v.begin(), v.end());
    for (std::size_t w = 0; w < inst_.slots->width; ++w) std::swap(out[dim(a, w)], out[dim(b, w)]);
    return ResourceVector(std::move(out));
  }

  std::optional<std::size_t> find_choice(std::size_t item, const ResourceVector& demand) const {
    const auto& choices = inst_.items[item].choices;
    for (std::size_t c = 0; c < choices.size(); ++c) {
      if (choices[c].demand == demand) return c;
    }
    return std::nullopt;
  }

  const PackingInstance& inst_;
  bool enabled_ = false;
  std::vector<std::vector<std::optional<std::size_t>>> slot_of_;
  std::vector<std::vector<std::vector<std::optional<std::size_t>>>> image_;
  std::vector<std::vector<bool>> closed_;
};

class BranchAndBound {
 public:
  BranchAndBound(const PackingInstance& inst, const SolverLimits& limits, std::ostream* trace)
      : inst_(inst),
        limits_(limits),
        trace_(trace),
        data_(detail::make_bound_data(inst)),
        order_(detail::decreasing_order(inst)),
        symmetry_(inst),
        current_(inst.items.size()),
        remaining_(inst.dims, 0.0),
        residual_(inst.dims, 0.0),
        empty_(inst.dims, 0.0) {
    same_as_prev_.assign(order_.size(), false);
    for (std::size_t pos = 1; pos < order_.size(); ++pos) {
      same_as_prev_[pos] = detail::identical_items(inst.items[order_[pos]], inst.items[order_[pos - 1]]);
    }
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      for (std::size_t d = 0; d < inst.dims; ++d) remaining_[d] += data_.min_demand[i][d];
    }
  }

  void seed(const Solution& s) {
    best_ = s;
    if (trace_) *trace_ << "seed incumbent $" << s.total_cost.str() << " (" << s.opened_bins.size() << " bins)\n";
  }

  Solution run(SolverStats& stats) {
    start_ = std::chrono::steady_clock::now();
    search(0);
    stats.nodes = nodes_;
    stats.incumbent_updates = updates_;
    stats.limits_hit = stopped_;
    if (!best_) throw ResourceExhaustedError("solver limits exhausted before any packing was found");
    Solution out = *best_;
    out.optimal = !stopped_;
    return out;
  }

 private:
  struct OpenBin {
    std::size_t type;
    std::vector<double> load;
  };

  bool out_of_budget() {
    if (nodes_ >= limits_.max_nodes) return true;
    if ((nodes_ & 1023u) == 0) {
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > limits_.time_budget_s) return true;
    }
    return false;
  }

  bool can_improve(long long cost_floor, std::size_t bins_floor) const {
    if (!best_) return true;
    const long long best = best_->total_cost.millis();
    return cost_floor < best || (cost_floor == best && bins_floor < best_->opened_bins.size());
  }

  void record_leaf() {
    const Money cost = Money::from_millis(committed_);
    if (!can_improve(committed_, bins_.size())) return;
    Solution s;
    s.total_cost = cost;
    for (const auto& b : bins_) s.opened_bins.push_back(b.type);
    s.placement = current_;
    best_ = std::move(s);
    ++updates_;
    if (trace_) {
      *trace_ << "node " << nodes_ << ": incumbent $" << cost.str() << " (" << bins_.size()
              << " bins)\n";
    }
  }

  void place(std::size_t item, std::size_t bin, std::size_t choice) {
    current_[item] = {item, bin, choice};
    const auto& demand = inst_.items[item].choices[choice].demand;
    for (std::size_t d = 0; d < inst_.dims; ++d) bins_[bin].load[d] += demand[d];
  }

  void unplace(std::size_t item, std::size_t bin, std::size_t choice) {
    const auto& demand = inst_.items[item].choices[choice].demand;
    for (std::size_t d = 0; d < inst_.dims; ++d) bins_[bin].load[d] -= demand[d];
  }

  void search(std::size_t pos) {
    if (stopped_) return;
    if (out_of_budget()) {
      stopped_ = true;
      return;
    }
    ++nodes_;
    if (pos == order_.size()) {
      record_leaf();
      return;
    }

    std::fill(residual_.begin(), residual_.end(), 0.0);
    for (const auto& b : bins_) {
      const auto& cap = inst_.bin_types[b.type].capacity;
      for (std::size_t d = 0; d < inst_.dims; ++d) residual_[d] += std::max(0.0, cap[d] - b.load[d]);
    }
    const double bound =
        detail::bound_millis(static_cast<double>(committed_), remaining_, residual_, data_);
    if (!can_improve(detail::bound_ceiling(bound), bins_.size())) return;

    const std::size_t i = order_[pos];
    const auto& item = inst_.items[i];
    const bool constrained = same_as_prev_[pos];
    const ItemPlacement lower = constrained ? current_[order_[pos - 1]] : ItemPlacement{};
    auto at_least_lower = [&](std::size_t b, std::size_t c) {
      return !constrained || b > lower.bin || (b == lower.bin && c >= lower.choice);
    };

    for (std::size_t d = 0; d < inst_.dims; ++d) remaining_[d] -= data_.min_demand[i][d];

    // Existing bins, in ordinal order.
    const std::size_t first_bin = constrained ? lower.bin : 0;
    const std::size_t open_count = bins_.size();
    for (std::size_t b = first_bin; b < open_count && !stopped_; ++b) {
      // An earlier interchangeable bin already covers this one.
      bool skip_bin = false;
      bool skip_from_lower_choice = false;
      for (std::size_t b2 = first_bin; b2 < b; ++b2) {
        if (bins_[b2].type != bins_[b].type || bins_[b2].load != bins_[b].load) continue;
        if (!constrained || b2 > lower.bin) {
          skip_bin = true;
        } else {
          skip_from_lower_choice = true;
        }
      }
      if (skip_bin) continue;

      const auto& cap = inst_.bin_types[bins_[b].type].capacity.values();
      for (std::size_t c = 0; c < item.choices.size() && !stopped_; ++c) {
        if (!at_least_lower(b, c)) continue;
        if (skip_from_lower_choice && c >= lower.choice) continue;
        if (auto img = symmetry_.lower_image(i, c, cap, bins_[b].load); img && at_least_lower(b, *img)) {
          continue;
        }
        if (!detail::fits(bins_[b].load, item.choices[c].demand.values(), cap)) continue;
        place(i, b, c);
        search(pos + 1);
        unplace(i, b, c);
      }
    }

    // One fresh bin per type.
    for (std::size_t t = 0; t < inst_.bin_types.size() && !stopped_; ++t) {
      const auto& type = inst_.bin_types[t];
      const auto& cap = type.capacity.values();
      for (std::size_t c = 0; c < item.choices.size() && !stopped_; ++c) {
        if (symmetry_.lower_image(i, c, cap, empty_)) continue;
        if (!detail::fits(empty_, item.choices[c].demand.values(), cap)) continue;
        bins_.push_back({t, empty_});
        committed_ += type.cost.millis();
        place(i, bins_.size() - 1, c);
        search(pos + 1);
        committed_ -= type.cost.millis();
        bins_.pop_back();
      }
    }

    for (std::size_t d = 0; d < inst_.dims; ++d) remaining_[d] += data_.min_demand[i][d];
  }

  const PackingInstance& inst_;
  const SolverLimits& limits_;
  std::ostream* trace_;
  const detail::BoundData data_;
  const std::vector<std::size_t> order_;
  const SlotSymmetry symmetry_;
  std::vector<bool> same_as_prev_;

  std::vector<OpenBin> bins_;
  std::vector<ItemPlacement> current_;
  std::vector<double> remaining_;
  std::vector<double> residual_;
  const std::vector<double> empty_;
  long long committed_ = 0;

  std::optional<Solution> best_;
  std::uint64_t nodes_ = 0;
  std::uint64_t updates_ = 0;
  bool stopped_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Solution solve_exact(const PackingInstance& instance, const SolverLimits& limits,
                     SolverStats* stats, std::ostream* trace) {
  if (limits.max_nodes == 0 || !(limits.time_budget_s > 0.0)) {
    throw ValidationError("solver limits must be positive");
  }
  instance.validate();
  if (instance.items.empty()) {
    if (stats) *stats = {};
    return Solution{{}, {}, Money{}, true};
  }

  BranchAndBound bnb(instance, limits, trace);
  bnb.seed(solve_heuristic(instance));
  SolverStats local;
  Solution best = bnb.run(local);
  if (stats) *stats = local;
  if (trace) {
    *trace << "explored " << local.nodes << " nodes, " << local.incumbent_updates
           << " incumbent updates" << (local.limits_hit ? ", limits hit" : "") << "\n";
  }
  if (!best.optimal && limits.optimality_required) {
    throw ResourceExhaustedError("solver limits exhausted before optimality was proven");
  }
  if (!verify(instance, best)) throw std::logic_error("branch-and-bound produced an infeasible packing");
  return best;
}

}  // namespace camplan
