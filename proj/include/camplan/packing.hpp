#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "camplan/money.hpp"
#include "camplan/resource_vector.hpp"

namespace camplan {

/// One candidate size of an item.
struct Choice {
  std::string id;
  ResourceVector demand;
};

struct Item {
  std::string id;
  std::vector<Choice> choices;
};

struct BinType {
  std::string name;
  ResourceVector capacity;
  Money cost;
};

/// `count` consecutive groups of `width` dimensions starting at `first_dim`
/// describe interchangeable sub-resources (GPU slots). Solvers may use it
/// for symmetry breaking; it never changes feasibility.
struct SlotLayout {
  std::size_t first_dim = 0;
  std::size_t width = 0;
  std::size_t count = 0;
};

/// Multiple-choice vector bin packing instance: every item picks one choice
/// and one bin, per-bin per-dimension load stays within capacity, and the
/// total cost of opened bins is minimized.
struct PackingInstance {
  std::size_t dims = 0;
  std::vector<BinType> bin_types;
  std::vector<Item> items;
  std::optional<SlotLayout> slots;

  /// Throws DimensionError on length mismatches and ValidationError on
  /// items without choices.
  void validate() const;
};

nlohmann::json instance_to_json(const PackingInstance& instance);
PackingInstance instance_from_json(const nlohmann::json& doc);

}  // namespace camplan
