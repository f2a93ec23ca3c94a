#include "camplan/catalog.hpp"

#include <algorithm>
#include <set>

#include "camplan/error.hpp"
#include "json_util.hpp"

namespace camplan {

using nlohmann::json;

void InstanceType::validate() const {
  if (name.empty()) throw ValidationError("instance type name must not be empty");
  if (cpu_cores < 1) throw ValidationError(name + ": cpu_cores must be >= 1");
  if (!(memory_gb > 0.0)) throw ValidationError(name + ": memory_gb must be > 0");
  if (hourly_cost <= Money{}) throw ValidationError(name + ": hourly_cost must be > 0");
  for (std::size_t g = 0; g < gpus.size(); ++g) {
    if (gpus[g].cores < 1) {
      throw ValidationError(name + ": gpus[" + std::to_string(g) + "].gpu_cores must be >= 1");
    }
    if (!(gpus[g].memory_gb > 0.0)) {
      throw ValidationError(name + ": gpus[" + std::to_string(g) + "].gpu_memory_gb must be > 0");
    }
  }
}

Catalog::Catalog(std::vector<InstanceType> types) : types_(std::move(types)) {
  if (types_.empty()) throw ValidationError("catalog has no instance types");
  std::set<std::string, std::less<>> names;
  for (const auto& t : types_) {
    t.validate();
    if (!names.insert(t.name).second) {
      throw ValidationError("duplicate instance type '" + t.name + "'");
    }
    n_max_ = std::max(n_max_, t.gpus.size());
  }
}

const InstanceType* Catalog::find(std::string_view name) const {
  auto it = std::find_if(types_.begin(), types_.end(),
                         [&](const InstanceType& t) { return t.name == name; });
  return it == types_.end() ? nullptr : &*it;
}

namespace {

Money parse_cost(const json& object, const std::string& path) {
  const json& value = detail::require_field(object, "hourly_cost", path);
  std::string field = detail::field_path(path, "hourly_cost");
  try {
    if (value.is_string()) return Money::parse(value.get<std::string>());
    if (value.is_number()) return Money::from_dollars(value.get<double>());
  } catch (const ParseError& e) {
    throw ParseError(field + ": " + e.what());
  }
  throw ParseError(field + ": expected a number or decimal string");
}

InstanceType parse_instance_type(const json& node, const std::string& path) {
  detail::require_object(node, path);
  InstanceType t;
  t.name = detail::get_string(node, "name", path);
  t.cpu_cores = static_cast<int>(detail::get_integer(node, "cpu_cores", path));
  t.memory_gb = detail::get_number(node, "memory_gb", path);
  t.hourly_cost = parse_cost(node, path);
  if (auto it = node.find("gpus"); it != node.end()) {
    std::string gpus_path = detail::field_path(path, "gpus");
    detail::require_array(*it, gpus_path);
    for (std::size_t g = 0; g < it->size(); ++g) {
      std::string gp = detail::index_path(gpus_path, g);
      const json& gj = detail::require_object((*it)[g], gp);
      t.gpus.push_back({static_cast<int>(detail::get_integer(gj, "gpu_cores", gp)),
                        detail::get_number(gj, "gpu_memory_gb", gp)});
    }
  }
  return t;
}

}  // namespace

Catalog load_catalog(const json& doc) {
  const json& list = detail::list_or_member(doc, "instance_types", "catalog");
  std::vector<InstanceType> types;
  for (std::size_t i = 0; i < list.size(); ++i) {
    types.push_back(parse_instance_type(list[i], detail::index_path("instance_types", i)));
  }
  return Catalog(std::move(types));
}

Catalog load_catalog_file(const std::filesystem::path& path) {
  return load_catalog(detail::read_json_file(path));
}

json catalog_to_json(const Catalog& catalog) {
  json list = json::array();
  for (const auto& t : catalog.types()) {
    json gpus = json::array();
    for (const auto& g : t.gpus) gpus.push_back({{"gpu_cores", g.cores}, {"gpu_memory_gb", g.memory_gb}});
    list.push_back({{"name", t.name},
                    {"cpu_cores", t.cpu_cores},
                    {"memory_gb", t.memory_gb},
                    {"gpus", gpus},
                    {"hourly_cost", t.hourly_cost.str()}});
  }
  return {{"instance_types", list}};
}

ResourceVector capacity_vector(const InstanceType& type, std::size_t n_max) {
  if (type.gpus.size() > n_max) {
    throw DimensionError(type.name + " has " + std::to_string(type.gpus.size()) +
                         " GPUs but the layout only has " + std::to_string(n_max) + " slots");
  }
  ResourceVector v(dims_for_gpus(n_max));
  v.set(0, type.cpu_cores);
  v.set(1, type.memory_gb);
  for (std::size_t g = 0; g < type.gpus.size(); ++g) {
    v.set(gpu_core_dim(g), type.gpus[g].cores);
    v.set(gpu_memory_dim(g), type.gpus[g].memory_gb);
  }
  return v;
}

}  // namespace camplan
