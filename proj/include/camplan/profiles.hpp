#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "camplan/resource_vector.hpp"

namespace camplan {

enum class Device { cpu_only, gpu_assisted };

enum class ResourceKind : std::size_t { cpu = 0, memory = 1, gpu = 2, gpu_memory = 3 };
inline constexpr std::size_t kResourceKinds = 4;

enum class Scaling { linear, constant };

/// Per-kind utilization fractions of a reference machine, indexed by ResourceKind.
using Fractions = std::array<double, kResourceKinds>;
using ScalingModes = std::array<Scaling, kResourceKinds>;

constexpr std::size_t index(ResourceKind kind) { return static_cast<std::size_t>(kind); }

/// cpu and gpu follow the frame rate, memory and gpu memory do not.
constexpr ScalingModes default_scaling() {
  return {Scaling::linear, Scaling::constant, Scaling::linear, Scaling::constant};
}

std::string_view to_string(Device device);
Device parse_device(std::string_view text);
std::string_view to_string(ResourceKind kind);

struct FrameSize {
  int width = 0;
  int height = 0;

  friend auto operator<=>(const FrameSize&, const FrameSize&) = default;
};

std::string to_string(FrameSize size);
/// Parses "640x480".
FrameSize parse_frame_size(std::string_view text);

struct ReferenceMachine {
  double cpu_cores = 0.0;
  double memory_gb = 0.0;
  double gpu_cores = 0.0;
  double gpu_memory_gb = 0.0;

  friend bool operator==(const ReferenceMachine&, const ReferenceMachine&) = default;
};

/// Parses "cores,memory_gb,gpu_cores,gpu_memory_gb".
ReferenceMachine parse_reference_machine(std::string_view text);

/// Resource model of one program on one device at one frame size.
struct Profile {
  std::string program;
  FrameSize frame_size;
  Device device = Device::cpu_only;
  double reference_rate = 0.0;
  Fractions reference_utilization{};
  ReferenceMachine reference_machine;
  std::optional<double> max_rate;
  ScalingModes scaling = default_scaling();

  /// Throws ValidationError when an invariant does not hold.
  void validate() const;
};

struct TestRunSample {
  double rate = 0.0;
  Fractions utilization{};
  double duration_s = 0.0;
};

/// Fits a profile to test-run samples. Linear kinds use a least-squares line
/// through the origin; constant kinds use the sample mean. The fitted
/// reference rate is the mean sample rate.
Profile fit_profile(std::span<const TestRunSample> samples, Device device, FrameSize frame_size,
                    const ReferenceMachine& reference_machine,
                    const ScalingModes& scaling = default_scaling());

/// Utilization fractions at `rate`; values above 1 are returned as-is.
Fractions demand_fraction(const Profile& profile, double rate);

/// Absolute demand at `rate`. GPU-assisted profiles require `gpu_slot`,
/// CPU-only profiles must not pass one.
ResourceVector demand_vector(const Profile& profile, double rate, std::size_t n_max,
                             std::optional<std::size_t> gpu_slot);

bool rate_feasible(const Profile& profile, double rate);

/// Ratio of GPU to CPU max achievable rate.
double speedup(const Profile& cpu_profile, const Profile& gpu_profile);

/// Profiles keyed by (program, frame size, device).
class ProfileStore {
 public:
  ProfileStore() = default;
  explicit ProfileStore(std::vector<Profile> profiles);

  /// Throws ValidationError on a duplicate key.
  void add(Profile profile);
  const Profile* find(std::string_view program, FrameSize frame_size, Device device) const;
  std::vector<Profile> all() const;
  std::size_t size() const { return profiles_.size(); }
  bool empty() const { return profiles_.empty(); }

 private:
  using Key = std::tuple<std::string, FrameSize, Device>;
  std::map<Key, Profile, std::less<>> profiles_;
};

nlohmann::json profile_to_json(const Profile& profile);
Profile profile_from_json(const nlohmann::json& doc, const std::string& path = "profile");

/// Accepts a bare list or {"profiles": [...]}.
ProfileStore load_profiles(const nlohmann::json& doc);
ProfileStore load_profiles_file(const std::filesystem::path& path);
nlohmann::json profiles_to_json(const ProfileStore& store);

/// A test-run sample file. Either a bare list of samples or an object with
/// optional metadata (program, device, frame_size, reference_machine,
/// max_rate_fps) and a "samples" list.
struct TestRunFile {
  std::optional<std::string> program;
  std::optional<Device> device;
  std::optional<FrameSize> frame_size;
  std::optional<ReferenceMachine> reference_machine;
  std::optional<double> max_rate;
  std::vector<TestRunSample> samples;
};

TestRunFile load_test_run(const nlohmann::json& doc);
TestRunFile load_test_run_file(const std::filesystem::path& path);
nlohmann::json test_run_to_json(const TestRunFile& run);

}  // namespace camplan
