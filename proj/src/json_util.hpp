#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace camplan::detail {

using nlohmann::json;

std::string field_path(const std::string& parent, std::string_view key);
std::string index_path(const std::string& parent, std::size_t i);

const json& require_object(const json& node, const std::string& path);
const json& require_array(const json& node, const std::string& path);
const json& require_field(const json& object, std::string_view key, const std::string& path);

double get_number(const json& object, std::string_view key, const std::string& path);
std::optional<double> get_optional_number(const json& object, std::string_view key,
                                          const std::string& path);
long long get_integer(const json& object, std::string_view key, const std::string& path);
std::string get_string(const json& object, std::string_view key, const std::string& path);

/// The list itself, or object[key] when the document is an object.
const json& list_or_member(const json& doc, std::string_view key, const std::string& path);

json read_json_file(const std::filesystem::path& path);

}  // namespace camplan::detail
