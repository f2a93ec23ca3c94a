#include <doctest.h>

#include <nlohmann/json.hpp>

#include "camplan/catalog.hpp"
#include "camplan/error.hpp"
#include "camplan/money.hpp"
#include "fixtures.hpp"

using camplan::Catalog;
using camplan::Money;
using nlohmann::json;

namespace {

std::vector<double> values(const camplan::ResourceVector& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("money parses, prints and compares exactly") {
  CHECK(Money::parse("0.419").millis() == 419);
  CHECK(Money::parse("7").millis() == 7000);
  CHECK(Money::parse("6.9190").millis() == 6919);
  CHECK(Money::from_dollars(0.41904).millis() == 419);
  CHECK((Money::parse("0.419") * 4).str() == "1.676");
  CHECK(Money().str() == "0.000");
  CHECK(Money::parse("0.65") < Money::parse("0.651"));
  CHECK_THROWS_AS(Money::parse("0.4191"), camplan::ParseError);
  CHECK_THROWS_AS(Money::parse("abc"), camplan::ParseError);
  CHECK_THROWS_AS(Money::parse(""), camplan::ParseError);
}

TEST_CASE("resource vectors reject negative and non-finite entries") {
  CHECK_THROWS_AS(camplan::ResourceVector({1.0, -0.5}), camplan::ValidationError);
  CHECK_THROWS_AS(camplan::ResourceVector({std::nan("")}), camplan::ValidationError);
  camplan::ResourceVector v{1.0, 2.0};
  v += camplan::ResourceVector{0.5, 0.0};
  CHECK(values(v) == std::vector<double>{1.5, 2.0});
  CHECK(values(v.scaled(2.0)) == std::vector<double>{3.0, 4.0});
  CHECK_THROWS_AS(v += camplan::ResourceVector{1.0}, camplan::DimensionError);
}

TEST_CASE("experiment catalog has one GPU slot") {
  const Catalog& c = camplan::testing::experiment_catalog();
  CHECK(c.n_max() == 1);
  CHECK(c.dims() == 4);
  REQUIRE(c.find("g2.2xlarge") != nullptr);
  CHECK(c.find("g2.2xlarge")->hourly_cost == Money::parse("0.650"));
  CHECK(c.find("c4.2xlarge")->gpus.empty());
  CHECK(c.find("m1.small") == nullptr);
}

TEST_CASE("full catalog has four GPU slots") {
  const Catalog& c = camplan::testing::ec2_catalog();
  CHECK(c.n_max() == 4);
  CHECK(c.dims() == 10);
  const auto* big = c.find("g2.8xlarge");
  REQUIRE(big != nullptr);
  CHECK(big->gpus.size() == 4);
  CHECK(big->hourly_cost == Money::parse("2.600"));
}

TEST_CASE("capacity vectors follow the slot layout") {
  const Catalog& small = camplan::testing::experiment_catalog();
  CHECK(values(capacity_vector(*small.find("c4.2xlarge"), 1)) == std::vector<double>{8, 15, 0, 0});
  CHECK(values(capacity_vector(*small.find("g2.2xlarge"), 1)) ==
        std::vector<double>{8, 15, 1536, 4});

  const Catalog& full = camplan::testing::ec2_catalog();
  CHECK(values(capacity_vector(*full.find("g2.8xlarge"), 4)) ==
        std::vector<double>{32, 60, 1536, 4, 1536, 4, 1536, 4, 1536, 4});
  CHECK(values(capacity_vector(*full.find("c4.2xlarge"), 4)) ==
        std::vector<double>{8, 15, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(capacity_vector(*full.find("g2.8xlarge"), 1), camplan::DimensionError);
}

TEST_CASE("catalog validation") {
  CHECK_THROWS_AS(Catalog({}), camplan::ValidationError);

  camplan::InstanceType t{"a", 8, 15.0, {}, Money::parse("0.1")};
  CHECK_THROWS_AS(Catalog({t, t}), camplan::ValidationError);

  auto zero_cost = t;
  zero_cost.hourly_cost = Money();
  CHECK_THROWS_AS(Catalog({zero_cost}), camplan::ValidationError);

  auto no_cores = t;
  no_cores.cpu_cores = 0;
  CHECK_THROWS_AS(Catalog({no_cores}), camplan::ValidationError);

  auto bad_gpu = t;
  bad_gpu.gpus = {{1536, 0.0}};
  CHECK_THROWS_AS(Catalog({bad_gpu}), camplan::ValidationError);

  CHECK(Catalog({t}).n_max() == 0);
}

TEST_CASE("catalog parse errors name the field") {
  const json missing_cost = json::parse(R"([{"name": "a", "cpu_cores": 8, "memory_gb": 15}])");
  try {
    camplan::load_catalog(missing_cost);
    FAIL("expected a parse error");
  } catch (const camplan::ParseError& e) {
    CHECK(std::string(e.what()).find("hourly_cost") != std::string::npos);
  }
  CHECK_THROWS_AS(camplan::load_catalog(json::parse(R"({"types": []})")), camplan::ParseError);
  CHECK_THROWS_AS(camplan::load_catalog(json::parse(R"([])")), camplan::ValidationError);
}

TEST_CASE("catalog json round trip") {
  const Catalog& c = camplan::testing::ec2_catalog();
  const Catalog back = camplan::load_catalog(camplan::catalog_to_json(c));
  CHECK(back.types() == c.types());
}
