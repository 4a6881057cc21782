#include "doctest.h"
#include "pricedisp/config.hpp"
#include "pricedisp/error.hpp"

using namespace pricedisp;
using nlohmann::json;

TEST_CASE("empty config gives defaults") {
  const auto rc = config::run_config_from_json(json::object());
  CHECK(rc.market.c == 0.0);
  CHECK(rc.market.v == 1.0);
  CHECK(rc.market.alpha == 0.5);
  CHECK(rc.tie_break.t == 0.5);
  CHECK(rc.grid == 101);
  CHECK(rc.simulation.num_hotels == 200);
  CHECK(rc.simulation.stay_dates.size() == 7);
  CHECK(rc.simulation.seed == 42);
  CHECK_FALSE(rc.sellout.has_value());
  CHECK(rc.regression.max_lag_days == 14);
}

TEST_CASE("blocks are read") {
  const auto j = json::parse(R"({
    "market": {"c": 36, "v": 998, "alpha": 0.3},
    "tie_break": {"t": 0.4, "r": 0.2, "s": 0.5},
    "grid": 1001,
    "threads": 4,
    "simulation": {"num_hotels": 10, "horizon_days": 3,
                   "alpha_schedule": {"1": 0.9, "2": 0.8, "3": 0.7},
                   "stay_dates": ["2018-01-01"], "seed": 7},
    "regression": {"spec": 7, "variant": "log-range", "max_lag_days": 2},
    "sellout": {"capacity_per_hotel": 3, "mean_bookings_per_day": 0.5, "seed": 5}
  })");
  const auto rc = config::run_config_from_json(j);
  CHECK(rc.market.c == 36.0);
  CHECK(rc.tie_break.s == 0.5);
  CHECK(rc.grid == 1001);
  CHECK(rc.threads == 4);
  CHECK(rc.simulation.num_hotels == 10);
  CHECK(rc.simulation.alpha_schedule == std::vector<double>{0.9, 0.8, 0.7});
  CHECK(rc.simulation.stay_dates == std::vector<Date>{Date(2018, 1, 1)});
  CHECK(rc.simulation.seed == 7);
  CHECK(rc.regression.spec == 7);
  CHECK(rc.regression.variant == econometrics::Variant::LogRange);
  REQUIRE(rc.sellout.has_value());
  CHECK(rc.sellout->capacity_per_hotel == 3);
  CHECK(rc.sellout->process.mean_per_day == 0.5);
}

TEST_CASE("alpha0 sets a linear schedule") {
  const auto s = config::simulation_from_json(json::parse(R"({"horizon_days": 4, "alpha0": 0.2})"));
  REQUIRE(s.alpha_schedule.size() == 4);
  CHECK(s.alpha_schedule.back() == doctest::Approx(0.2));
  CHECK(s.alpha_schedule.front() == doctest::Approx(0.8));
}

TEST_CASE("simulation config round trips") {
  const auto s = simulator::SimulationConfig::desk_scale();
  const auto back = config::simulation_from_json(config::simulation_to_json(s));
  CHECK(back.alpha_schedule == s.alpha_schedule);
  CHECK(back.stay_dates == s.stay_dates);
  CHECK(back.num_hotels == s.num_hotels);
  CHECK(back.cost_range.max == s.cost_range.max);
}

TEST_CASE("invalid configs are rejected") {
  const char* bad[] = {
      R"({"markets": {}})",
      R"({"market": {"c": 1, "v": 0.5}})",
      R"({"market": {"cost": 1}})",
      R"({"market": {"c": "one"}})",
      R"({"tie_break": {"t": 1.5}})",
      R"({"simulation": {"num_hotel": 3}})",
      R"({"simulation": {"horizon_days": 2, "alpha_schedule": {"1": 0.9}}})",
      R"({"simulation": {"horizon_days": 2, "alpha_schedule": {"1": 0.7, "2": 0.9}}})",
      R"({"simulation": {"horizon_days": 2, "alpha_schedule": {"1": 0.9, "x": 0.8}}})",
      R"({"simulation": {"horizon_days": 2, "alpha0": 0.5, "alpha_schedule": {"1": 0.9, "2": 0.8}}})",
      R"({"simulation": {"stay_dates": ["2018-02-30"]}})",
      R"({"simulation": {"value_range": {"min": 10, "max": 20}}})",
      R"({"regression": {"variant": "robust"}})",
      R"({"sellout": {"capacity_per_hotel": 0}})",
      R"([1, 2])",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(config::run_config_from_json(json::parse(text)), Error);
  }
  CHECK_THROWS_AS(config::load_run_config("/nonexistent/config.json"), InvalidConfig);
}
