#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "camplan/cli.hpp"
#include "fixtures.hpp"

using camplan::testing::data_path;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "camplan");
  std::ostringstream out, err;
  Result r;
  r.code = camplan::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> inputs(const std::string& workload) {
  return {"--catalog", data_path("catalog_experiment.json").string(), "--profiles",
          data_path("profiles_640x480.json").string(), "--workload", data_path(workload).string()};
}

std::vector<std::string> cmd(std::string name, std::vector<std::string> rest) {
  rest.insert(rest.begin(), std::move(name));
  return rest;
}

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "camplan_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("plan scenario 1 under st3") {
  const Result r = run(cmd("plan", inputs("scenario1.json") + std::vector<std::string>{"--strategy", "st3"}));
  CHECK(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["hourly_cost"] == "0.650");
  REQUIRE(doc["instances"].size() == 1);
  CHECK(doc["instances"][0]["type"] == "g2.2xlarge");
  CHECK(r.err.find("0.650") != std::string::npos);
}

TEST_CASE("plan output is byte-for-byte deterministic") {
  const auto args = cmd("plan", inputs("scenario3.json") + std::vector<std::string>{"--strategy", "st3"});
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("plan scenario 3 under st1 is infeasible") {
  const Result r = run(cmd("plan", inputs("scenario3.json") + std::vector<std::string>{"--strategy", "st1"}));
  CHECK(r.code == 2);
  const json doc = json::parse(r.out);
  CHECK(doc["status"] == "infeasible");
  CHECK(doc["reason"].get<std::string>().find("no feasible choice: ZF desired 8.00 FPS > cpu max 0.56") !=
        std::string::npos);
}

TEST_CASE("empty workload plans to nothing") {
  const Result r = run(cmd("plan", inputs("empty_workload.json")));
  CHECK(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["hourly_cost"] == "0.000");
  CHECK(doc["instances"].empty());
}

TEST_CASE("compare writes rows to --out and a table to stdout") {
  const auto path = temp_file("compare1.json");
  const Result r = run(cmd("compare", inputs("scenario1.json") + std::vector<std::string>{"--out", path.string()}));
  CHECK(r.code == 0);
  CHECK(r.out.find("ST2") != std::string::npos);
  std::ifstream in(path);
  const json doc = json::parse(in);
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["hourly_cost"] == "1.676");
  CHECK(doc["rows"][0]["non_gpu_instances"] == 4);
  CHECK(doc["rows"][0]["savings_percent"] == 0);
  CHECK(doc["rows"][1]["savings_percent"] == 61);
  CHECK(doc["rows"][2]["gpu_instances"] == 1);
}

TEST_CASE("simulate a planned and a crammed plan") {
  const auto plan_path = temp_file("plan2.json");
  REQUIRE(run(cmd("plan", inputs("scenario2.json") + std::vector<std::string>{"--out", plan_path.string()})).code == 0);
  Result r = run(cmd("simulate", inputs("scenario2.json") + std::vector<std::string>{"--plan", plan_path.string()}));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["overall_performance"] == 1.0);

  const auto workload = temp_file("crammed_workload.json");
  std::ofstream(workload) << R"({"streams": [{"stream_id": "zf", "program": "ZF",
      "frame_size": {"w": 640, "h": 480}, "desired_rate_fps": 8.0, "replicas": 2}]})";
  const auto crammed = temp_file("crammed_plan.json");
  std::ofstream(crammed) << R"({"instances": [{"type": "g2.2xlarge", "ordinal": 0}],
      "assignments": [{"stream_id": "zf#0", "instance": 0, "device": "gpu0"},
                      {"stream_id": "zf#1", "instance": 0, "device": "gpu0"}],
      "hourly_cost": "0.650"})";
  r = run({"simulate", "--catalog", data_path("catalog_experiment.json").string(), "--profiles",
           data_path("profiles_640x480.json").string(), "--workload", workload.string(), "--plan",
           crammed.string()});
  CHECK(r.code == 3);
  CHECK(json::parse(r.out)["overall_performance"].get<double>() == doctest::Approx(1.0 / 1.76));
}

TEST_CASE("simulate the empty plan") {
  const auto plan_path = temp_file("plan_empty.json");
  std::ofstream(plan_path) << R"({"instances": [], "assignments": [], "hourly_cost": "0"})";
  const Result r = run(cmd("simulate", inputs("empty_workload.json") + std::vector<std::string>{"--plan", plan_path.string()}));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["overall_performance"] == 1.0);
}

TEST_CASE("profile-fit prints speedups") {
  const Result r = run({"profile-fit", "--samples", data_path("runs/vgg16_cpu.json").string(),
                        "--samples", data_path("runs/vgg16_gpu.json").string(), "--samples",
                        data_path("runs/zf_cpu.json").string(), "--samples",
                        data_path("runs/zf_gpu.json").string(), "--out",
                        temp_file("fitted.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("speedup VGG-16 640x480: 12.89") != std::string::npos);
  CHECK(r.out.find("speedup ZF 640x480: 16.34") != std::string::npos);
}

TEST_CASE("profile-fit warns about an all-zero run") {
  const auto path = temp_file("zero_run.json");
  std::ofstream(path) << R"({"samples": [{"rate_fps": 1.0, "utilization": {"cpu": 0, "memory": 0}}]})";
  const Result r = run({"profile-fit", "--samples", path.string(), "--program", "idle", "--device",
                        "cpu-only", "--frame-size", "640x480", "--reference-machine", "8,15,0,0"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  const json doc = json::parse(r.out);
  CHECK(doc["profiles"][0]["utilization"]["cpu"] == 0.0);
}

TEST_CASE("input errors exit 1") {
  CHECK(run({"plan", "--catalog", "/nonexistent.json", "--profiles",
             data_path("profiles_640x480.json").string(), "--workload",
             data_path("scenario1.json").string()})
            .code == 1);
  CHECK(run(cmd("plan", inputs("scenario1.json") + std::vector<std::string>{"--strategy", "st9"})).code == 1);
  CHECK(run(cmd("plan", inputs("scenario1.json") + std::vector<std::string>{"--headroom", "1.5"})).code == 1);
  CHECK(run({"plan"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"profile-fit"}).code == 1);

  const auto broken = temp_file("broken.json");
  std::ofstream(broken) << "{not json";
  const Result r = run({"validate", "--catalog", broken.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("validate accepts the bundled fixtures") {
  CHECK(run(cmd("validate", inputs("scenario3.json"))).code == 0);
}

TEST_CASE("synth-run is reproducible and fits back") {
  const auto args = std::vector<std::string>{
      "synth-run", "--profiles", data_path("profiles_640x480.json").string(), "--program", "ZF",
      "--device", "gpu-assisted", "--frame-size", "640x480", "--rate", "4", "--count", "5",
      "--seed", "3"};
  const Result a = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == run(args).out);
  const json doc = json::parse(a.out);
  CHECK(doc["samples"].size() == 5);
  CHECK(doc["samples"][0]["utilization"]["cpu"].get<double>() == doctest::Approx(0.44));
}
