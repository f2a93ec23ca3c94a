#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "camplan/catalog.hpp"
#include "camplan/model.hpp"
#include "camplan/profiles.hpp"

namespace camplan {

struct InstanceUsage {
  std::size_t ordinal = 0;
  std::string type;
  std::vector<double> utilization;  // fraction of raw capacity per dimension
};

struct StreamPerformance {
  std::string stream_id;
  double performance = 1.0;
};

struct SimulationReport {
  std::vector<InstanceUsage> per_instance;
  std::vector<StreamPerformance> per_stream;
  // Mean of per-stream performance; 1.0 for an empty workload.
  double overall_performance = 1.0;
};

/// Steady-state evaluation of a plan. A stream runs at full rate unless its
/// device caps the rate or a dimension it uses is loaded past raw capacity;
/// in the latter case every stream on that dimension is slowed by
/// capacity/demand.
SimulationReport simulate(const Plan& plan, const Workload& workload, const ProfileStore& profiles,
                          const Catalog& catalog);

struct Violation {
  enum class Kind { utilization, rate_cap };

  Kind kind = Kind::utilization;
  std::size_t instance = 0;   // utilization only
  std::size_t dimension = 0;  // utilization only
  std::string stream_id;      // rate_cap only
  double value = 0.0;         // utilization fraction, or desired rate
  double limit = 0.0;         // headroom, or max rate
  std::string message;
};

/// Lists every dimension loaded beyond `headroom` and every stream whose
/// desired rate exceeds its device's max rate.
std::vector<Violation> check_plan(const Plan& plan, const Workload& workload,
                                  const ProfileStore& profiles, const Catalog& catalog,
                                  double headroom = kDefaultHeadroom);

/// Synthetic test run: demand_fraction(truth, rate) plus N(0, noise_sd),
/// clamped to [0, 1]. Deterministic for a given seed.
std::vector<TestRunSample> generate_test_run(const Profile& truth, double rate,
                                             std::size_t n_samples, double noise_sd,
                                             std::uint64_t seed, double duration_s = 60.0);

std::string dimension_name(std::size_t dim);

nlohmann::json report_to_json(const SimulationReport& report);
nlohmann::json violations_to_json(const std::vector<Violation>& violations);

}  // namespace camplan
