#include "json_util.hpp"

#include <cmath>
#include <fstream>

#include "camplan/error.hpp"

namespace camplan::detail {

std::string field_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

std::string index_path(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

const json& require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ParseError(path + ": expected an object");
  return node;
}

const json& require_array(const json& node, const std::string& path) {
  if (!node.is_array()) throw ParseError(path + ": expected a list");
  return node;
}

const json& require_field(const json& object, std::string_view key, const std::string& path) {
  require_object(object, path);
  auto it = object.find(key);
  if (it == object.end()) throw ParseError(field_path(path, key) + ": missing field");
  return *it;
}

double get_number(const json& object, std::string_view key, const std::string& path) {
  const json& value = require_field(object, key, path);
  if (!value.is_number()) throw ParseError(field_path(path, key) + ": expected a number");
  double x = value.get<double>();
  if (!std::isfinite(x)) throw ParseError(field_path(path, key) + ": not finite");
  return x;
}

std::optional<double> get_optional_number(const json& object, std::string_view key,
                                          const std::string& path) {
  require_object(object, path);
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  return get_number(object, key, path);
}

long long get_integer(const json& object, std::string_view key, const std::string& path) {
  const json& value = require_field(object, key, path);
  if (value.is_number_integer()) return value.get<long long>();
  if (value.is_number_float()) {
    double x = value.get<double>();
    if (std::isfinite(x) && x == std::floor(x)) return static_cast<long long>(x);
  }
  throw ParseError(field_path(path, key) + ": expected an integer");
}

std::string get_string(const json& object, std::string_view key, const std::string& path) {
  const json& value = require_field(object, key, path);
  if (!value.is_string()) throw ParseError(field_path(path, key) + ": expected a string");
  return value.get<std::string>();
}

const json& list_or_member(const json& doc, std::string_view key, const std::string& path) {
  if (doc.is_array()) return doc;
  return require_array(require_field(doc, key, path), field_path(path, key));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace camplan::detail
