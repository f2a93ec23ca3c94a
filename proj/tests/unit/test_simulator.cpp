#include <doctest.h>

#include <cmath>

#include "camplan/error.hpp"
#include "camplan/simulator.hpp"
#include "fixtures.hpp"

using namespace camplan;
using camplan::testing::bundled_profiles;
using camplan::testing::experiment_catalog;
using camplan::testing::kVga;
using camplan::testing::scenario;

namespace {

StreamRequest stream(std::string id, std::string program, double rate) {
  return {std::move(id), std::move(program), kVga, rate, 1};
}

Plan one_instance(std::string type, std::vector<Assignment> assignments, const Catalog& catalog) {
  Plan plan;
  plan.instances = {{type, 0}};
  plan.assignments = std::move(assignments);
  plan.hourly_cost = catalog.find(type)->hourly_cost;
  return plan;
}

double slope(const Profile& p, ResourceKind kind) {
  return p.reference_utilization[index(kind)] / p.reference_rate;
}

}  // namespace

TEST_CASE("scenario 2 st3 plan runs at full speed") {
  const Workload w = scenario(2);
  const Plan plan = plan_workload(w, experiment_catalog(), bundled_profiles(), Strategy::st3);
  const SimulationReport r = simulate(plan, w, bundled_profiles(), experiment_catalog());
  REQUIRE(r.per_instance.size() == 1);
  CHECK(r.per_instance[0].utilization[0] == doctest::Approx(0.394 + 0.178 * 2.5));
  CHECK(r.per_instance[0].utilization[0] == doctest::Approx(0.839));
  for (const auto& s : r.per_stream) CHECK(s.performance == 1.0);
  CHECK(r.overall_performance == 1.0);
  CHECK(check_plan(plan, w, bundled_profiles(), experiment_catalog()).empty());
}

TEST_CASE("vgg on a gpu at 2 fps") {
  const Workload w{stream("v", "VGG-16", 2.0)};
  const Plan plan = one_instance("g2.2xlarge", {{"v", 0, 0}}, experiment_catalog());
  const SimulationReport r = simulate(plan, w, bundled_profiles(), experiment_catalog());
  CHECK(r.per_instance[0].utilization[0] == doctest::Approx(0.53));
  CHECK(r.per_instance[0].utilization[2] == doctest::Approx(0.46));
  CHECK(r.overall_performance == 1.0);
}

TEST_CASE("past the planner cap but under raw capacity keeps full speed") {
  const Workload w{stream("a", "ZF", 0.55), stream("b", "ZF", 0.55)};
  const Plan plan = one_instance("c4.2xlarge", {{"a", 0, {}}, {"b", 0, {}}}, experiment_catalog());
  const SimulationReport r = simulate(plan, w, bundled_profiles(), experiment_catalog());
  CHECK(r.per_instance[0].utilization[0] == doctest::Approx(0.979));
  CHECK(r.overall_performance == 1.0);
  const auto v = check_plan(plan, w, bundled_profiles(), experiment_catalog());
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::utilization);
  CHECK(v[0].dimension == 0);
}

TEST_CASE("two zf gpu streams at 8 fps on one instance degrade") {
  const Workload w{stream("a", "ZF", 8.0), stream("b", "ZF", 8.0)};
  const Plan plan = one_instance("g2.2xlarge", {{"a", 0, 0}, {"b", 0, 0}}, experiment_catalog());
  const SimulationReport r = simulate(plan, w, bundled_profiles(), experiment_catalog());
  CHECK(r.per_instance[0].utilization[0] == doctest::Approx(1.76));
  CHECK(r.overall_performance == doctest::Approx(1.0 / 1.76));
  CHECK(r.overall_performance < 0.9);
}

TEST_CASE("rate caps limit performance and are reported") {
  const Workload w{stream("z", "ZF", 1.12)};
  const Plan plan = one_instance("c4.2xlarge", {{"z", 0, {}}}, experiment_catalog());
  const SimulationReport r = simulate(plan, w, bundled_profiles(), experiment_catalog());
  CHECK(r.per_stream[0].performance == doctest::Approx(0.5));
  const auto v = check_plan(plan, w, bundled_profiles(), experiment_catalog());
  bool rate_cap = false;
  for (const auto& x : v) rate_cap = rate_cap || (x.kind == Violation::Kind::rate_cap && x.stream_id == "z");
  CHECK(rate_cap);
}

TEST_CASE("an extra stream on a full gpu instance breaks the headroom") {
  const Workload w = scenario(3);
  Plan plan = plan_workload(w, experiment_catalog(), bundled_profiles(), Strategy::st2);
  CHECK(check_plan(plan, w, bundled_profiles(), experiment_catalog()).empty());

  // move one VGG stream next to a ZF stream: 88% + 5.3% cpu
  std::size_t zf_instance = 0;
  for (const auto& a : plan.assignments) {
    if (a.stream_id.rfind("zf", 0) == 0) zf_instance = a.instance;
  }
  for (auto& a : plan.assignments) {
    if (a.stream_id == "vgg16#0") a.instance = zf_instance;
  }
  const auto v = check_plan(plan, w, bundled_profiles(), experiment_catalog());
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].kind == Violation::Kind::utilization);
  CHECK(v[0].instance == zf_instance);
  CHECK(v[0].value == doctest::Approx(0.933));
}

TEST_CASE("empty plan and workload") {
  const SimulationReport r = simulate({}, {}, bundled_profiles(), experiment_catalog());
  CHECK(r.overall_performance == 1.0);
  CHECK(r.per_stream.empty());
  CHECK(check_plan({}, {}, bundled_profiles(), experiment_catalog()).empty());
}

TEST_CASE("inconsistent plans are contract errors") {
  const Workload w{stream("a", "ZF", 0.5)};
  CHECK_THROWS_AS(simulate(one_instance("c4.2xlarge", {}, experiment_catalog()), w,
                           bundled_profiles(), experiment_catalog()),
                  ContractError);
  CHECK_THROWS_AS(simulate(one_instance("c4.2xlarge", {{"a", 0, 0}}, experiment_catalog()), w,
                           bundled_profiles(), experiment_catalog()),
                  ContractError);
  CHECK_THROWS_AS(simulate(one_instance("c4.2xlarge", {{"a", 3, {}}}, experiment_catalog()), w,
                           bundled_profiles(), experiment_catalog()),
                  ContractError);
}

TEST_CASE("noiseless test runs reproduce the truth") {
  const Profile& truth = camplan::testing::profile("VGG-16", Device::gpu_assisted);
  const auto samples = generate_test_run(truth, 0.2, 5, 0.0, 7);
  REQUIRE(samples.size() == 5);
  for (const auto& s : samples) {
    CHECK(s.utilization[0] == doctest::Approx(0.053));
    CHECK(s.utilization[2] == doctest::Approx(0.046));
  }
  const auto at_three = generate_test_run(truth, 3.0, 4, 0.0, 7);
  const Profile fitted = fit_profile(at_three, truth.device, truth.frame_size, truth.reference_machine);
  CHECK(slope(fitted, ResourceKind::cpu) == doctest::Approx(slope(truth, ResourceKind::cpu)).epsilon(1e-12));
  CHECK(slope(fitted, ResourceKind::gpu) == doctest::Approx(slope(truth, ResourceKind::gpu)).epsilon(1e-12));

  CHECK_THROWS_AS(generate_test_run(truth, 4.0, 3, 0.0, 7), ValidationError);
  CHECK(generate_test_run(truth, 0.2, 3, 0.01, 99)[2].utilization ==
        generate_test_run(truth, 0.2, 3, 0.01, 99)[2].utilization);
}

TEST_CASE("noisy test runs fit within three standard deviations") {
  const Profile& truth = camplan::testing::profile("VGG-16", Device::gpu_assisted);
  const double rate = 0.2, noise = 0.005;
  const std::size_t n = 50;
  // slope = mean(u) / r for samples at one rate
  const double sd = noise / (std::sqrt(static_cast<double>(n)) * rate);
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto samples = generate_test_run(truth, rate, n, noise, seed);
    const Profile fitted = fit_profile(samples, truth.device, truth.frame_size, truth.reference_machine);
    const double err = std::abs(slope(fitted, ResourceKind::cpu) - slope(truth, ResourceKind::cpu));
    if (err <= 3 * sd) ++within;
    if (seed == 42) CHECK(err <= 3 * sd);
  }
  // 99.7% expected inside 3 sd
  CHECK(within >= 97);
}

TEST_CASE("dimension names") {
  CHECK(dimension_name(0) == "cpu");
  CHECK(dimension_name(1) == "memory");
  CHECK(dimension_name(2) == "gpu0_cores");
  CHECK(dimension_name(5) == "gpu1_memory");
}
