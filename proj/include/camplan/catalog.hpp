#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "camplan/money.hpp"
#include "camplan/resource_vector.hpp"

namespace camplan {

struct Gpu {
  int cores = 0;
  double memory_gb = 0.0;

  friend bool operator==(const Gpu&, const Gpu&) = default;
};

struct InstanceType {
  std::string name;
  int cpu_cores = 0;
  double memory_gb = 0.0;
  std::vector<Gpu> gpus;
  Money hourly_cost;

  bool has_gpu() const { return !gpus.empty(); }
  void validate() const;

  friend bool operator==(const InstanceType&, const InstanceType&) = default;
};

/// Validated, immutable set of instance types.
class Catalog {
 public:
  /// Throws ValidationError on an empty list, duplicate names, or any
  /// nonpositive cost or capacity.
  explicit Catalog(std::vector<InstanceType> types);

  const std::vector<InstanceType>& types() const { return types_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t dims() const { return dims_for_gpus(n_max_); }

  const InstanceType* find(std::string_view name) const;

 private:
  std::vector<InstanceType> types_;
  std::size_t n_max_ = 0;
};

/// Accepts either a bare list of instance types or {"instance_types": [...]}.
Catalog load_catalog(const nlohmann::json& doc);
Catalog load_catalog_file(const std::filesystem::path& path);
nlohmann::json catalog_to_json(const Catalog& catalog);

/// Capacity of `type` laid out for a catalog with `n_max` GPU slots.
/// Throws DimensionError if the type has more than `n_max` GPUs.
ResourceVector capacity_vector(const InstanceType& type, std::size_t n_max);

}  // namespace camplan
