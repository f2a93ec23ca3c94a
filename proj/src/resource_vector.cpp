#include "camplan/resource_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "camplan/error.hpp"

namespace camplan {
namespace {

void check_entry(std::size_t i, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError("resource vector entry " + std::to_string(i) +
                          " must be finite and nonnegative, got " + std::to_string(value));
  }
}

}  // namespace

ResourceVector::ResourceVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) check_entry(i, values_[i]);
}

ResourceVector::ResourceVector(std::initializer_list<double> values)
    : ResourceVector(std::vector<double>(values)) {}

void ResourceVector::set(std::size_t i, double value) {
  check_entry(i, value);
  values_.at(i) = value;
}

ResourceVector& ResourceVector::operator+=(const ResourceVector& other) {
  if (other.size() != size()) {
    throw DimensionError("cannot add vectors of length " + std::to_string(size()) + " and " +
                         std::to_string(other.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ResourceVector ResourceVector::scaled(double factor) const {
  if (!std::isfinite(factor) || factor < 0.0) throw ValidationError("scale factor must be >= 0");
  ResourceVector out = *this;
  for (double& v : out.values_) v *= factor;
  return out;
}

bool ResourceVector::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

}  // namespace camplan
