#include "camplan/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "camplan/error.hpp"
#include "json_util.hpp"

namespace camplan {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kResourceKinds> kKindNames{"cpu", "memory", "gpu",
                                                                   "gpu_memory"};

bool is_gpu_kind(std::size_t k) { return k == index(ResourceKind::gpu) || k == index(ResourceKind::gpu_memory); }

void check_fractions(const Fractions& f, const std::string& what) {
  for (std::size_t k = 0; k < kResourceKinds; ++k) {
    if (!std::isfinite(f[k]) || f[k] < 0.0 || f[k] > 1.0) {
      throw ValidationError(what + ": " + std::string(kKindNames[k]) + " utilization " +
                            std::to_string(f[k]) + " is outside [0, 1]");
    }
  }
}

void check_rate(double rate) {
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw UsageError("frame rate must be positive, got " + std::to_string(rate));
  }
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(Device device) {
  return device == Device::cpu_only ? "cpu-only" : "gpu-assisted";
}

Device parse_device(std::string_view text) {
  if (text == "cpu-only" || text == "cpu") return Device::cpu_only;
  if (text == "gpu-assisted" || text == "gpu") return Device::gpu_assisted;
  throw ParseError("unknown device '" + std::string(text) + "' (expected cpu-only or gpu-assisted)");
}

std::string_view to_string(ResourceKind kind) { return kKindNames[index(kind)]; }

std::string to_string(FrameSize size) {
  return std::to_string(size.width) + "x" + std::to_string(size.height);
}

FrameSize parse_frame_size(std::string_view text) {
  auto x = text.find('x');
  if (x == std::string_view::npos) throw ParseError("invalid frame size '" + std::string(text) + "'");
  FrameSize size{static_cast<int>(parse_double(text.substr(0, x), "frame width")),
                 static_cast<int>(parse_double(text.substr(x + 1), "frame height"))};
  if (size.width <= 0 || size.height <= 0) {
    throw ParseError("invalid frame size '" + std::string(text) + "'");
  }
  return size;
}

ReferenceMachine parse_reference_machine(std::string_view text) {
  std::array<double, 4> parts{};
  std::size_t n = 0;
  while (n < parts.size()) {
    auto comma = text.find(',');
    parts[n++] = parse_double(text.substr(0, comma), "reference machine");
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (n != parts.size()) {
    throw ParseError("reference machine needs cores,memory_gb,gpu_cores,gpu_memory_gb");
  }
  return {parts[0], parts[1], parts[2], parts[3]};
}

void Profile::validate() const {
  std::string what = program.empty() ? std::string("profile") : "profile " + program;
  if (!std::isfinite(reference_rate) || reference_rate <= 0.0) {
    throw ValidationError(what + ": reference_rate must be > 0");
  }
  check_fractions(reference_utilization, what);
  if (device == Device::cpu_only &&
      (reference_utilization[index(ResourceKind::gpu)] != 0.0 ||
       reference_utilization[index(ResourceKind::gpu_memory)] != 0.0)) {
    throw ValidationError(what + ": cpu-only profile cannot use GPU resources");
  }
  if (max_rate && !(std::isfinite(*max_rate) && *max_rate > 0.0)) {
    throw ValidationError(what + ": max_rate must be > 0");
  }
  const auto& m = reference_machine;
  if (!(m.cpu_cores > 0.0) || m.memory_gb < 0.0 || m.gpu_cores < 0.0 || m.gpu_memory_gb < 0.0) {
    throw ValidationError(what + ": invalid reference machine");
  }
  if (device == Device::gpu_assisted && !(m.gpu_cores > 0.0)) {
    throw ValidationError(what + ": gpu-assisted profile needs a reference GPU");
  }
}

Profile fit_profile(std::span<const TestRunSample> samples, Device device, FrameSize frame_size,
                    const ReferenceMachine& reference_machine, const ScalingModes& scaling) {
  if (samples.empty()) throw ValidationError("cannot fit a profile without samples");
  for (const auto& s : samples) {
    if (!std::isfinite(s.rate) || s.rate <= 0.0) {
      throw ValidationError("test-run sample rate must be > 0");
    }
    check_fractions(s.utilization, "test-run sample");
  }

  const double n = static_cast<double>(samples.size());
  double sum_rate = 0.0;
  double sum_rate_sq = 0.0;
  Fractions sum_ur{};
  Fractions sum_u{};
  for (const auto& s : samples) {
    sum_rate += s.rate;
    sum_rate_sq += s.rate * s.rate;
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      sum_ur[k] += s.utilization[k] * s.rate;
      sum_u[k] += s.utilization[k];
    }
  }

  Profile p;
  p.frame_size = frame_size;
  p.device = device;
  p.reference_rate = sum_rate / n;
  p.reference_machine = reference_machine;
  p.scaling = scaling;
  for (std::size_t k = 0; k < kResourceKinds; ++k) {
    if (device == Device::cpu_only && is_gpu_kind(k)) continue;  // GPU readings ignored
    if (scaling[k] == Scaling::linear) {
      double slope = sum_ur[k] / sum_rate_sq;
      p.reference_utilization[k] = std::min(1.0, slope * p.reference_rate);
    } else {
      p.reference_utilization[k] = sum_u[k] / n;
    }
  }
  return p;
}

Fractions demand_fraction(const Profile& profile, double rate) {
  check_rate(rate);
  Fractions out = profile.reference_utilization;
  const double ratio = rate / profile.reference_rate;
  for (std::size_t k = 0; k < kResourceKinds; ++k) {
    if (profile.scaling[k] == Scaling::linear) out[k] *= ratio;
  }
  return out;
}

ResourceVector demand_vector(const Profile& profile, double rate, std::size_t n_max,
                             std::optional<std::size_t> gpu_slot) {
  if (profile.device == Device::cpu_only && gpu_slot) {
    throw UsageError("profile " + profile.program + " is cpu-only; no GPU slot may be given");
  }
  if (profile.device == Device::gpu_assisted && !gpu_slot) {
    throw UsageError("profile " + profile.program + " is gpu-assisted and needs a GPU slot");
  }
  if (gpu_slot && *gpu_slot >= n_max) {
    throw DimensionError("GPU slot " + std::to_string(*gpu_slot) + " out of range for " +
                         std::to_string(n_max) + " slots");
  }
  const Fractions f = demand_fraction(profile, rate);
  const auto& m = profile.reference_machine;
  ResourceVector v(dims_for_gpus(n_max));
  v.set(0, f[index(ResourceKind::cpu)] * m.cpu_cores);
  v.set(1, f[index(ResourceKind::memory)] * m.memory_gb);
  if (gpu_slot) {
    v.set(gpu_core_dim(*gpu_slot), f[index(ResourceKind::gpu)] * m.gpu_cores);
    v.set(gpu_memory_dim(*gpu_slot), f[index(ResourceKind::gpu_memory)] * m.gpu_memory_gb);
  }
  return v;
}

bool rate_feasible(const Profile& profile, double rate) {
  check_rate(rate);
  return !profile.max_rate || rate <= *profile.max_rate;
}

double speedup(const Profile& cpu_profile, const Profile& gpu_profile) {
  if (!cpu_profile.max_rate || !gpu_profile.max_rate) {
    throw ValidationError("speedup needs max_rate on both profiles");
  }
  if (cpu_profile.program != gpu_profile.program ||
      cpu_profile.frame_size != gpu_profile.frame_size) {
    throw UsageError("speedup compares profiles of different programs or frame sizes");
  }
  return *gpu_profile.max_rate / *cpu_profile.max_rate;
}

ProfileStore::ProfileStore(std::vector<Profile> profiles) {
  for (auto& p : profiles) add(std::move(p));
}

void ProfileStore::add(Profile profile) {
  profile.validate();
  Key key{profile.program, profile.frame_size, profile.device};
  if (profiles_.contains(key)) {
    throw ValidationError("duplicate profile for " + profile.program + " " +
                          to_string(profile.frame_size) + " " +
                          std::string(to_string(profile.device)));
  }
  profiles_.emplace(std::move(key), std::move(profile));
}

const Profile* ProfileStore::find(std::string_view program, FrameSize frame_size,
                                  Device device) const {
  auto it = profiles_.find(Key{std::string(program), frame_size, device});
  return it == profiles_.end() ? nullptr : &it->second;
}

std::vector<Profile> ProfileStore::all() const {
  std::vector<Profile> out;
  out.reserve(profiles_.size());
  for (const auto& [key, p] : profiles_) out.push_back(p);
  return out;
}

// --- JSON ------------------------------------------------------------------

namespace {

FrameSize frame_size_from_json(const json& node, const std::string& path) {
  if (node.is_string()) return parse_frame_size(node.get<std::string>());
  FrameSize size{static_cast<int>(detail::get_integer(node, "w", path)),
                 static_cast<int>(detail::get_integer(node, "h", path))};
  if (size.width <= 0 || size.height <= 0) throw ParseError(path + ": frame size must be positive");
  return size;
}

json frame_size_to_json(FrameSize size) { return {{"w", size.width}, {"h", size.height}}; }

Fractions fractions_from_json(const json& node, const std::string& path) {
  detail::require_object(node, path);
  Fractions f{};
  f[index(ResourceKind::cpu)] = detail::get_number(node, "cpu", path);
  for (std::size_t k = 1; k < kResourceKinds; ++k) {
    f[k] = detail::get_optional_number(node, kKindNames[k], path).value_or(0.0);
  }
  return f;
}

json fractions_to_json(const Fractions& f) {
  json out = json::object();
  for (std::size_t k = 0; k < kResourceKinds; ++k) out[std::string(kKindNames[k])] = f[k];
  return out;
}

ReferenceMachine machine_from_json(const json& node, const std::string& path) {
  detail::require_object(node, path);
  return {detail::get_number(node, "cpu_cores", path),
          detail::get_optional_number(node, "memory_gb", path).value_or(0.0),
          detail::get_optional_number(node, "gpu_cores", path).value_or(0.0),
          detail::get_optional_number(node, "gpu_memory_gb", path).value_or(0.0)};
}

json machine_to_json(const ReferenceMachine& m) {
  return {{"cpu_cores", m.cpu_cores},
          {"memory_gb", m.memory_gb},
          {"gpu_cores", m.gpu_cores},
          {"gpu_memory_gb", m.gpu_memory_gb}};
}

Scaling parse_scaling(const json& node, const std::string& path) {
  if (node.is_string()) {
    auto s = node.get<std::string>();
    if (s == "linear") return Scaling::linear;
    if (s == "constant") return Scaling::constant;
  }
  throw ParseError(path + ": expected \"linear\" or \"constant\"");
}

TestRunSample sample_from_json(const json& node, const std::string& path) {
  detail::require_object(node, path);
  TestRunSample s;
  s.rate = detail::get_number(node, "rate_fps", path);
  s.utilization = fractions_from_json(detail::require_field(node, "utilization", path),
                                      detail::field_path(path, "utilization"));
  s.duration_s = detail::get_optional_number(node, "duration_s", path).value_or(0.0);
  return s;
}

}  // namespace

json profile_to_json(const Profile& p) {
  json scaling = json::object();
  for (std::size_t k = 0; k < kResourceKinds; ++k) {
    scaling[std::string(kKindNames[k])] = p.scaling[k] == Scaling::linear ? "linear" : "constant";
  }
  json out{{"program", p.program},
           {"frame_size", frame_size_to_json(p.frame_size)},
           {"device", to_string(p.device)},
           {"reference_rate_fps", p.reference_rate},
           {"utilization", fractions_to_json(p.reference_utilization)},
           {"reference_machine", machine_to_json(p.reference_machine)},
           {"scaling", scaling}};
  if (p.max_rate) out["max_rate_fps"] = *p.max_rate;
  return out;
}

Profile profile_from_json(const json& node, const std::string& path) {
  detail::require_object(node, path);
  Profile p;
  p.program = detail::get_string(node, "program", path);
  p.frame_size = frame_size_from_json(detail::require_field(node, "frame_size", path),
                                      detail::field_path(path, "frame_size"));
  try {
    p.device = parse_device(detail::get_string(node, "device", path));
  } catch (const ParseError& e) {
    throw ParseError(detail::field_path(path, "device") + ": " + e.what());
  }
  p.reference_rate = detail::get_number(node, "reference_rate_fps", path);
  p.reference_utilization = fractions_from_json(detail::require_field(node, "utilization", path),
                                                detail::field_path(path, "utilization"));
  p.reference_machine = machine_from_json(detail::require_field(node, "reference_machine", path),
                                          detail::field_path(path, "reference_machine"));
  p.max_rate = detail::get_optional_number(node, "max_rate_fps", path);
  if (auto it = node.find("scaling"); it != node.end()) {
    std::string sp = detail::field_path(path, "scaling");
    detail::require_object(*it, sp);
    for (const auto& [key, value] : it->items()) {
      auto k = std::find(kKindNames.begin(), kKindNames.end(), key);
      if (k == kKindNames.end()) throw ParseError(detail::field_path(sp, key) + ": unknown resource kind");
      p.scaling[static_cast<std::size_t>(k - kKindNames.begin())] =
          parse_scaling(value, detail::field_path(sp, key));
    }
  }
  return p;
}

ProfileStore load_profiles(const json& doc) {
  const json& list = detail::list_or_member(doc, "profiles", "profiles");
  ProfileStore store;
  for (std::size_t i = 0; i < list.size(); ++i) {
    store.add(profile_from_json(list[i], detail::index_path("profiles", i)));
  }
  return store;
}

ProfileStore load_profiles_file(const std::filesystem::path& path) {
  return load_profiles(detail::read_json_file(path));
}

json profiles_to_json(const ProfileStore& store) {
  json list = json::array();
  for (const auto& p : store.all()) list.push_back(profile_to_json(p));
  return {{"profiles", list}};
}

TestRunFile load_test_run(const json& doc) {
  TestRunFile run;
  const json& list = detail::list_or_member(doc, "samples", "test_run");
  if (doc.is_object()) {
    const std::string path = "test_run";
    if (doc.contains("program")) run.program = detail::get_string(doc, "program", path);
    if (doc.contains("device")) run.device = parse_device(detail::get_string(doc, "device", path));
    if (doc.contains("frame_size")) {
      run.frame_size = frame_size_from_json(doc["frame_size"], detail::field_path(path, "frame_size"));
    }
    if (doc.contains("reference_machine")) {
      run.reference_machine =
          machine_from_json(doc["reference_machine"], detail::field_path(path, "reference_machine"));
    }
    run.max_rate = detail::get_optional_number(doc, "max_rate_fps", path);
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    run.samples.push_back(sample_from_json(list[i], detail::index_path("samples", i)));
  }
  return run;
}

TestRunFile load_test_run_file(const std::filesystem::path& path) {
  return load_test_run(detail::read_json_file(path));
}

json test_run_to_json(const TestRunFile& run) {
  json samples = json::array();
  for (const auto& s : run.samples) {
    samples.push_back({{"rate_fps", s.rate},
                       {"utilization", fractions_to_json(s.utilization)},
                       {"duration_s", s.duration_s}});
  }
  json out = json::object();
  if (run.program) out["program"] = *run.program;
  if (run.device) out["device"] = to_string(*run.device);
  if (run.frame_size) out["frame_size"] = frame_size_to_json(*run.frame_size);
  if (run.reference_machine) out["reference_machine"] = machine_to_json(*run.reference_machine);
  if (run.max_rate) out["max_rate_fps"] = *run.max_rate;
  out["samples"] = samples;
  return out;
}

}  // namespace camplan
