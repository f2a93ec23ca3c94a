#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace camplan {

/// Nonnegative demand or capacity vector.
///
/// Layout for a catalog whose largest instance carries N GPUs:
///   [0] CPU cores, [1] memory GB,
///   [2 + 2g] cores of GPU slot g, [3 + 2g] memory GB of GPU slot g.
class ResourceVector {
 public:
  ResourceVector() = default;
  explicit ResourceVector(std::size_t dims) : values_(dims, 0.0) {}
  explicit ResourceVector(std::vector<double> values);
  ResourceVector(std::initializer_list<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  /// Throws ValidationError for negative or non-finite values.
  void set(std::size_t i, double value);

  ResourceVector& operator+=(const ResourceVector& other);
  ResourceVector scaled(double factor) const;

  bool is_zero() const;

  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

 private:
  std::vector<double> values_;
};

constexpr std::size_t dims_for_gpus(std::size_t n_max) { return 2 + 2 * n_max; }
constexpr std::size_t gpu_core_dim(std::size_t slot) { return 2 + 2 * slot; }
constexpr std::size_t gpu_memory_dim(std::size_t slot) { return 3 + 2 * slot; }

}  // namespace camplan
