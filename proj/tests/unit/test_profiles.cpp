#include <doctest.h>

#include <cmath>
#include <vector>

#include "camplan/error.hpp"
#include "camplan/profiles.hpp"
#include "fixtures.hpp"

using namespace camplan;
using camplan::testing::kVga;
using camplan::testing::profile;

namespace {

constexpr ReferenceMachine kRef{8, 15, 1536, 4};

Profile make_profile(Device device, Fractions at_reference, double reference_rate = 0.2) {
  Profile p;
  p.program = "synthetic";
  p.frame_size = kVga;
  p.device = device;
  p.reference_rate = reference_rate;
  p.reference_utilization = at_reference;
  p.reference_machine = kRef;
  return p;
}

std::vector<double> values(const ResourceVector& v) { return {v.begin(), v.end()}; }

void check_vector(const ResourceVector& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CAPTURE(i);
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("single sample fit keeps the measured point") {
  const std::vector<TestRunSample> samples{{0.2, {0.053, 0.0, 0.046, 0.0}, 300}};
  const Profile p = fit_profile(samples, Device::gpu_assisted, kVga, kRef);
  CHECK(p.reference_rate == doctest::Approx(0.2));
  CHECK(p.reference_utilization[0] == doctest::Approx(0.053));
  CHECK(p.reference_utilization[2] == doctest::Approx(0.046));
  CHECK(p.reference_utilization[1] == 0.0);
}

TEST_CASE("all-zero samples fit an all-zero profile") {
  const std::vector<TestRunSample> samples{{1.5, {0, 0, 0, 0}, 60}};
  const Profile p = fit_profile(samples, Device::cpu_only, kVga, kRef);
  for (double u : p.reference_utilization) CHECK(u == 0.0);
}

TEST_CASE("three noiseless samples recover the slope") {
  const double slope = 0.1;
  std::vector<TestRunSample> samples;
  for (double r : {1.0, 2.5, 4.0}) samples.push_back({r, {slope * r, 0.02, 0.0, 0.0}, 60});
  const Profile p = fit_profile(samples, Device::cpu_only, kVga, kRef);
  const double fitted = p.reference_utilization[0] / p.reference_rate;
  CHECK(std::abs(fitted - slope) / slope < 1e-9);
  CHECK(p.reference_utilization[1] == doctest::Approx(0.02));
}

TEST_CASE("cpu-only fits ignore gpu readings") {
  const std::vector<TestRunSample> samples{{0.2, {0.3, 0.1, 0.2, 0.1}, 60}};
  const Profile p = fit_profile(samples, Device::cpu_only, kVga, kRef);
  CHECK(p.reference_utilization[2] == 0.0);
  CHECK(p.reference_utilization[3] == 0.0);
}

TEST_CASE("fit rejects bad samples") {
  CHECK_THROWS_AS(fit_profile({}, Device::cpu_only, kVga, kRef), ValidationError);
  const std::vector<TestRunSample> over{{0.2, {1.2, 0, 0, 0}, 60}};
  CHECK_THROWS_AS(fit_profile(over, Device::cpu_only, kVga, kRef), ValidationError);
  const std::vector<TestRunSample> zero_rate{{0.0, {0.1, 0, 0, 0}, 60}};
  CHECK_THROWS_AS(fit_profile(zero_rate, Device::cpu_only, kVga, kRef), ValidationError);
}

TEST_CASE("demand fractions scale with the rate") {
  const Fractions vgg = demand_fraction(profile("VGG-16", Device::cpu_only), 0.25);
  CHECK(vgg[0] == doctest::Approx(0.394 * 0.25 / 0.2));
  CHECK(vgg[0] == doctest::Approx(0.4925));

  const Fractions zf = demand_fraction(profile("ZF", Device::gpu_assisted), 8.0);
  CHECK(zf[0] == doctest::Approx(0.88));
  CHECK(zf[2] == doctest::Approx(0.48));

  const Profile& p = profile("ZF", Device::cpu_only);
  CHECK(demand_fraction(p, p.reference_rate) == p.reference_utilization);
}

TEST_CASE("constant kinds do not scale") {
  const Profile p = make_profile(Device::gpu_assisted, {0.1, 0.03, 0.1, 0.07});
  const Fractions f = demand_fraction(p, 2.0);
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(0.03));
  CHECK(f[2] == doctest::Approx(1.0));
  CHECK(f[3] == doctest::Approx(0.07));
}

TEST_CASE("demand vectors") {
  const Profile cpu = make_profile(Device::cpu_only, {0.5, 0.05, 0, 0});
  check_vector(demand_vector(cpu, 0.2, 1, std::nullopt), {4.0, 0.75, 0, 0});

  const Profile gpu = make_profile(Device::gpu_assisted, {0.1, 0.03, 0.1, 0.07});
  check_vector(demand_vector(gpu, 0.2, 1, 0), {0.8, 0.45, 153.6, 0.28});
  check_vector(demand_vector(gpu, 0.2, 4, 2), {0.8, 0.45, 0, 0, 0, 0, 153.6, 0.28, 0, 0});

  CHECK_THROWS_AS(demand_vector(cpu, 0.2, 1, 0), UsageError);
  CHECK_THROWS_AS(demand_vector(gpu, 0.2, 1, std::nullopt), UsageError);
  CHECK_THROWS_AS(demand_vector(gpu, 0.2, 1, 1), DimensionError);
}

TEST_CASE("rate caps") {
  CHECK_FALSE(rate_feasible(profile("ZF", Device::cpu_only), 8.0));
  CHECK(rate_feasible(profile("ZF", Device::gpu_assisted), 8.0));
  CHECK(rate_feasible(profile("ZF", Device::cpu_only), 0.56));
  const Profile uncapped = make_profile(Device::cpu_only, {0.1, 0, 0, 0});
  CHECK(rate_feasible(uncapped, 1e6));
}

TEST_CASE("speedup is the ratio of max rates") {
  CHECK(speedup(profile("VGG-16", Device::cpu_only), profile("VGG-16", Device::gpu_assisted)) ==
        doctest::Approx(12.89).epsilon(0.01 / 12.89));
  CHECK(speedup(profile("ZF", Device::cpu_only), profile("ZF", Device::gpu_assisted)) ==
        doctest::Approx(16.34).epsilon(0.01 / 16.34));
  const Profile& p = profile("ZF", Device::cpu_only);
  CHECK(speedup(p, p) == 1.0);
  CHECK_THROWS(speedup(make_profile(Device::cpu_only, {0.1, 0, 0, 0}), p));
}

TEST_CASE("bundled profiles match the measured table") {
  struct Row {
    const char* program;
    Device device;
    double cpu, gpu, max_rate;
  };
  const Row rows[] = {{"VGG-16", Device::cpu_only, 0.394, 0.0, 0.28},
                      {"VGG-16", Device::gpu_assisted, 0.053, 0.046, 3.61},
                      {"ZF", Device::cpu_only, 0.178, 0.0, 0.56},
                      {"ZF", Device::gpu_assisted, 0.022, 0.012, 9.15}};
  for (const Row& row : rows) {
    CAPTURE(row.program);
    const Profile& p = profile(row.program, row.device);
    CHECK(p.reference_rate == 0.2);
    CHECK(p.reference_utilization[0] == row.cpu);
    CHECK(p.reference_utilization[2] == row.gpu);
    CHECK(p.max_rate == row.max_rate);
    CHECK(p.reference_machine == kRef);
  }
}

TEST_CASE("profile store keys by program, frame size and device") {
  ProfileStore store;
  store.add(make_profile(Device::cpu_only, {0.1, 0, 0, 0}));
  CHECK_THROWS_AS(store.add(make_profile(Device::cpu_only, {0.2, 0, 0, 0})), ValidationError);
  store.add(make_profile(Device::gpu_assisted, {0.1, 0, 0.1, 0}));
  CHECK(store.size() == 2);
  CHECK(store.find("synthetic", {320, 240}, Device::cpu_only) == nullptr);
  CHECK(store.find("synthetic", kVga, Device::gpu_assisted) != nullptr);
}

TEST_CASE("profile json round trip") {
  const ProfileStore& store = camplan::testing::bundled_profiles();
  const ProfileStore back = load_profiles(profiles_to_json(store));
  REQUIRE(back.size() == store.size());
  for (const Profile& p : store.all()) {
    const Profile* q = back.find(p.program, p.frame_size, p.device);
    REQUIRE(q != nullptr);
    CHECK(q->reference_utilization == p.reference_utilization);
    CHECK(q->max_rate == p.max_rate);
  }
}

TEST_CASE("text parsers") {
  CHECK(parse_frame_size("640x480") == kVga);
  CHECK_THROWS_AS(parse_frame_size("640"), ParseError);
  CHECK_THROWS_AS(parse_frame_size("0x480"), ParseError);
  CHECK(parse_reference_machine("8,15,1536,4") == kRef);
  CHECK_THROWS_AS(parse_reference_machine("8,15"), ParseError);
  CHECK(parse_device("gpu") == Device::gpu_assisted);
  CHECK(parse_device("cpu-only") == Device::cpu_only);
  CHECK_THROWS_AS(parse_device("tpu"), ParseError);
}

TEST_CASE("test-run files load with metadata") {
  const TestRunFile run = load_test_run_file(camplan::testing::data_path("runs/zf_gpu.json"));
  CHECK(run.program == "ZF");
  CHECK(run.device == Device::gpu_assisted);
  CHECK(run.max_rate == 9.15);
  REQUIRE(run.samples.size() == 1);
  CHECK(run.samples[0].utilization[0] == 0.022);
}
