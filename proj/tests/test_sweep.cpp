#include "dsa/errors.hpp"
#include "dsa/sweep.hpp"

#include <doctest.h>

#include <sstream>

using namespace dsa;

namespace {

SweepSpec tiny(SweepParameter p, std::vector<std::string> values, int rounds) {
  SweepSpec s;
  s.parameter = p;
  s.values = std::move(values);
  s.rounds = rounds;
  s.base.engine.horizon_s = 60.0;
  s.base.deployment.num_pus = 20;
  s.workers = 2;
  return s;
}

std::string aggregate_text(const SweepSpec &spec, const SweepResult &r) {
  std::ostringstream os;
  write_aggregate_csv(os, spec, r);
  return os.str();
}

} // namespace

TEST_CASE("variant labels") {
  CHECK(Variant::parse("bard").label() == "bard");
  CHECK(Variant::parse("ddsaar").algorithm == Algorithm::Ddsaar);
  const auto v = Variant::parse("bard-TV");
  CHECK(v.bands == BandSet::only(BandId::TV));
  CHECK(v.label() == "bard-TV");
  CHECK_THROWS_AS(Variant::parse("greedy"), ConfigError);
  CHECK_THROWS_AS(Variant::parse("bard-UHF"), ConfigError);
}

TEST_CASE("expansion counts and seeds") {
  SweepSpec s;
  s.values = {"0", "50", "100", "150"};
  const auto points = expand_sweep(s);
  CHECK(points.size() == 160);
  CHECK(points.front().config.engine.seed == 1);
  CHECK(points[19].config.engine.seed == 20);
  CHECK(points[20].config.deployment.num_pus == 50);
  CHECK(points.back().config.engine.algorithm == Algorithm::Ddsaar);
}

TEST_CASE("spec parsing") {
  const auto s = sweep_spec_from_json(nlohmann::json::parse(R"({
    "varied_parameter": "pu_concentration_band", "values": ["TV", "LTE"],
    "pu_counts": [150], "algorithms": ["bard", "ddsaar"], "rounds": 3,
    "base_config": {"horizon_s": 120}})"));
  CHECK(s.parameter == SweepParameter::PuConcentration);
  CHECK(s.rounds == 3);
  CHECK(s.base.engine.horizon_s == 120.0);
  CHECK(expand_sweep(s).size() == 12);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"values": []})")),
                  ConfigError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"values": [1], "rounds": 0})")),
                  ConfigError);
  CHECK_THROWS_AS(sweep_spec_from_json(nlohmann::json::parse(R"({"values": [1], "speed": 0})")),
                  ConfigError);
  try {
    sweep_spec_from_json(nlohmann::json::parse(R"({"values": [1], "base_config": {"x": 1}})"));
    FAIL("expected a config error");
  } catch (const ConfigError &e) {
    CHECK(e.where() == "/base_config/x");
  }
}

TEST_CASE("summary statistics") {
  const auto one = summarize({0.5});
  CHECK(one.mean == 0.5);
  CHECK(one.std == 0.0);
  const auto three = summarize({1.0, 2.0, std::nullopt, 3.0});
  CHECK(three.n == 3);
  CHECK(three.mean == 2.0);
  CHECK(three.std == doctest::Approx(1.0));
  CHECK(summarize({std::nullopt}).n == 0);
}

TEST_CASE("sweeps are reproducible and aggregate the runs") {
  const auto spec = tiny(SweepParameter::NumPus, {"0", "20"}, 2);
  const auto a = run_sweep(spec);
  auto serial = spec;
  serial.workers = 1;
  const auto b = run_sweep(serial);
  CHECK(aggregate_text(spec, a) == aggregate_text(serial, b));
  REQUIRE(a.runs.size() == 8);
  REQUIRE(a.aggregates.size() == 4);
  for (const auto &row : a.aggregates) {
    std::vector<std::optional<double>> mdr;
    for (const auto &r : a.runs)
      if (r.point.variant.label() == row.variant && r.point.value == row.value)
        mdr.push_back(r.metrics.mdr);
    CHECK(mdr.size() == 2);
    CHECK(row.mdr.mean == doctest::Approx(summarize(mdr).mean).epsilon(1e-15));
    CHECK(row.mdr.mean >= 0.0);
    CHECK(row.mdr.mean <= 1.0);
    CHECK(row.mdr.std >= 0.0);
  }
}

TEST_CASE("single round reports zero spread") {
  const auto spec = tiny(SweepParameter::NumSus, {"10"}, 1);
  const auto r = run_sweep(spec);
  for (const auto &row : r.aggregates)
    CHECK(row.mdr.std == 0.0);
}

TEST_CASE("concentration sweeps print a band table") {
  auto spec = tiny(SweepParameter::PuConcentration, {"TV", "LTE"}, 1);
  spec.pu_counts = {20};
  const auto r = run_sweep(spec);
  std::ostringstream os;
  write_summary(os, spec, r);
  const auto text = os.str();
  CHECK(text.find("all PUs in TV") != std::string::npos);
  CHECK(text.find("all PUs in LTE") != std::string::npos);
  std::ostringstream runs;
  write_runs_csv(runs, spec, r);
  CHECK(runs.str().rfind("# config_hash=", 0) == 0);
}

TEST_CASE("simulation-time sweeps vary the horizon") {
  const auto spec = tiny(SweepParameter::SimTime, {"30", "60"}, 1);
  const auto r = run_sweep(spec);
  CHECK(r.aggregates.size() == 4);
}
