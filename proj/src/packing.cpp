#include "camplan/packing.hpp"

#include "camplan/error.hpp"
#include "json_util.hpp"

namespace camplan {

using nlohmann::json;

void PackingInstance::validate() const {
  auto check = [&](const ResourceVector& v, const std::string& what) {
    if (v.size() != dims) {
      throw DimensionError(what + " has length " + std::to_string(v.size()) + ", expected " +
                           std::to_string(dims));
    }
  };
  for (const auto& b : bin_types) {
    check(b.capacity, "capacity of bin type " + b.name);
    if (b.cost < Money{}) throw ValidationError("bin type " + b.name + " has negative cost");
  }
  for (const auto& item : items) {
    if (item.choices.empty()) throw ValidationError("item " + item.id + " has no choices");
    for (const auto& c : item.choices) check(c.demand, "demand of " + item.id + "/" + c.id);
  }
  if (slots && slots->first_dim + slots->width * slots->count > dims) {
    throw DimensionError("slot layout exceeds the instance dimension");
  }
}

json instance_to_json(const PackingInstance& instance) {
  json bins = json::array();
  for (const auto& b : instance.bin_types) {
    bins.push_back({{"name", b.name},
                    {"capacity", std::vector<double>(b.capacity.begin(), b.capacity.end())},
                    {"cost", b.cost.str()}});
  }
  json items = json::array();
  for (const auto& item : instance.items) {
    json choices = json::array();
    for (const auto& c : item.choices) {
      choices.push_back(
          {{"id", c.id}, {"demand", std::vector<double>(c.demand.begin(), c.demand.end())}});
    }
    items.push_back({{"id", item.id}, {"choices", choices}});
  }
  json out{{"dims", instance.dims}, {"bin_types", bins}, {"items", items}};
  if (instance.slots) {
    out["slots"] = {{"first_dim", instance.slots->first_dim},
                    {"width", instance.slots->width},
                    {"count", instance.slots->count}};
  }
  return out;
}

namespace {

ResourceVector vector_from_json(const json& node, const std::string& path) {
  detail::require_array(node, path);
  std::vector<double> values;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) throw ParseError(detail::index_path(path, i) + ": expected a number");
    values.push_back(node[i].get<double>());
  }
  try {
    return ResourceVector(std::move(values));
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

PackingInstance instance_from_json(const json& doc) {
  const std::string root = "instance";
  PackingInstance inst;
  inst.dims = static_cast<std::size_t>(detail::get_integer(doc, "dims", root));
  const json& bins = detail::require_array(detail::require_field(doc, "bin_types", root), "bin_types");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    std::string p = detail::index_path("bin_types", i);
    BinType b;
    b.name = bins[i].contains("name") ? detail::get_string(bins[i], "name", p) : "bin" + std::to_string(i);
    b.capacity = vector_from_json(detail::require_field(bins[i], "capacity", p),
                                  detail::field_path(p, "capacity"));
    const json& cost = detail::require_field(bins[i], "cost", p);
    b.cost = cost.is_string() ? Money::parse(cost.get<std::string>())
                              : Money::from_dollars(detail::get_number(bins[i], "cost", p));
    inst.bin_types.push_back(std::move(b));
  }
  const json& items = detail::require_array(detail::require_field(doc, "items", root), "items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string p = detail::index_path("items", i);
    Item item;
    item.id = items[i].contains("id") ? detail::get_string(items[i], "id", p) : std::to_string(i);
    const json& choices = detail::require_array(detail::require_field(items[i], "choices", p),
                                                detail::field_path(p, "choices"));
    for (std::size_t c = 0; c < choices.size(); ++c) {
      std::string cp = detail::index_path(detail::field_path(p, "choices"), c);
      Choice choice;
      choice.id = choices[c].contains("id") ? detail::get_string(choices[c], "id", cp) : std::to_string(c);
      choice.demand = vector_from_json(detail::require_field(choices[c], "demand", cp),
                                       detail::field_path(cp, "demand"));
      item.choices.push_back(std::move(choice));
    }
    inst.items.push_back(std::move(item));
  }
  if (auto it = doc.find("slots"); it != doc.end()) {
    inst.slots = SlotLayout{static_cast<std::size_t>(detail::get_integer(*it, "first_dim", "slots")),
                            static_cast<std::size_t>(detail::get_integer(*it, "width", "slots")),
                            static_cast<std::size_t>(detail::get_integer(*it, "count", "slots"))};
  }
  inst.validate();
  return inst;
}

}  // namespace camplan
