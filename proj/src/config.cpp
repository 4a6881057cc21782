#include "pricedisp/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <string_view>

#include "pricedisp/error.hpp"

namespace pricedisp::config {

using nlohmann::json;

namespace {

void require_object(const json& j, std::string_view context) {
  if (!j.is_object()) {
    throw InvalidConfig(std::string(context) + ": expected a JSON object");
  }
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context) {
  require_object(j, context);
  const std::set<std::string_view> ok(allowed);
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) {
      throw InvalidConfig(std::string(context) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, std::string_view context) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string(context) + "." + key + ": " + e.what());
  }
}

simulator::Interval read_interval(const json& j, std::string_view context) {
  check_keys(j, {"min", "max"}, context);
  simulator::Interval out;
  if (!j.contains("min") || !j.contains("max")) {
    throw InvalidConfig(std::string(context) + ": needs min and max");
  }
  read(j, "min", out.min, context);
  read(j, "max", out.max, context);
  return out;
}

}  // namespace

simulator::SimulationConfig simulation_from_json(const json& j) {
  constexpr std::string_view ctx = "simulation";
  check_keys(j,
             {"num_hotels", "websites_per_hotel", "stay_dates", "horizon_days",
              "alpha_schedule", "alpha0", "cost_range", "value_range",
              "double_room_share", "require_monotone_schedule", "seed"},
             ctx);
  auto config = simulator::SimulationConfig::desk_scale();
  read(j, "num_hotels", config.num_hotels, ctx);
  if (j.contains("websites_per_hotel")) {
    const auto& w = j.at("websites_per_hotel");
    check_keys(w, {"min", "max"}, "simulation.websites_per_hotel");
    read(w, "min", config.websites_per_hotel.min, ctx);
    read(w, "max", config.websites_per_hotel.max, ctx);
  }
  if (j.contains("stay_dates")) {
    const auto& dates = j.at("stay_dates");
    if (!dates.is_array()) {
      throw InvalidConfig("simulation.stay_dates: expected an array");
    }
    config.stay_dates.clear();
    for (const auto& d : dates) {
      if (!d.is_string()) {
        throw InvalidConfig("simulation.stay_dates: expected ISO date strings");
      }
      config.stay_dates.push_back(Date::parse(d.get<std::string>()));
    }
  }
  read(j, "horizon_days", config.horizon_days, ctx);
  if (config.horizon_days < 1) {
    throw InvalidConfig("simulation.horizon_days must be at least 1");
  }
  if (j.contains("alpha_schedule") && j.contains("alpha0")) {
    throw InvalidConfig("simulation: give alpha_schedule or alpha0, not both");
  }
  if (j.contains("alpha_schedule")) {
    const auto& sched = j.at("alpha_schedule");
    require_object(sched, "simulation.alpha_schedule");
    config.alpha_schedule.assign(static_cast<std::size_t>(config.horizon_days),
                                 0.0);
    std::set<int> given;
    for (const auto& [key, value] : sched.items()) {
      int d = 0;
      try {
        std::size_t used = 0;
        d = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw InvalidConfig("simulation.alpha_schedule: key '" + key +
                            "' is not a day count");
      }
      if (d < 1 || d > config.horizon_days) {
        throw InvalidConfig("simulation.alpha_schedule: day " + key +
                            " outside 1..horizon_days");
      }
      if (!value.is_number()) {
        throw InvalidConfig("simulation.alpha_schedule: values must be numbers");
      }
      config.alpha_schedule[static_cast<std::size_t>(d - 1)] = value.get<double>();
      given.insert(d);
    }
    if (given.size() != static_cast<std::size_t>(config.horizon_days)) {
      throw InvalidConfig(
          "simulation.alpha_schedule must give every day 1..horizon_days");
    }
  } else {
    double alpha0 = 0.5;
    read(j, "alpha0", alpha0, ctx);
    config.alpha_schedule =
        simulator::linear_alpha_schedule(config.horizon_days, alpha0);
  }
  if (j.contains("cost_range")) {
    config.cost_range = read_interval(j.at("cost_range"), "simulation.cost_range");
  }
  if (j.contains("value_range")) {
    config.value_range =
        read_interval(j.at("value_range"), "simulation.value_range");
  }
  read(j, "double_room_share", config.double_room_share, ctx);
  read(j, "require_monotone_schedule", config.require_monotone_schedule, ctx);
  read(j, "seed", config.seed, ctx);
  config.validate();
  return config;
}

json simulation_to_json(const simulator::SimulationConfig& config) {
  json j;
  j["num_hotels"] = config.num_hotels;
  j["websites_per_hotel"] = {{"min", config.websites_per_hotel.min},
                             {"max", config.websites_per_hotel.max}};
  j["stay_dates"] = json::array();
  for (const auto& d : config.stay_dates) j["stay_dates"].push_back(d.iso());
  j["horizon_days"] = config.horizon_days;
  json sched = json::object();
  for (std::size_t d = 0; d < config.alpha_schedule.size(); ++d) {
    sched[std::to_string(d + 1)] = config.alpha_schedule[d];
  }
  j["alpha_schedule"] = sched;
  j["cost_range"] = {{"min", config.cost_range.min},
                     {"max", config.cost_range.max}};
  j["value_range"] = {{"min", config.value_range.min},
                      {"max", config.value_range.max}};
  j["double_room_share"] = config.double_room_share;
  j["require_monotone_schedule"] = config.require_monotone_schedule;
  j["seed"] = config.seed;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  constexpr std::string_view ctx = "config";
  check_keys(j,
             {"market", "tie_break", "grid", "simulation", "regression",
              "sellout", "threads"},
             ctx);
  RunConfig rc;
  if (j.contains("market")) {
    const auto& m = j.at("market");
    check_keys(m, {"c", "v", "alpha"}, "market");
    read(m, "c", rc.market.c, "market");
    read(m, "v", rc.market.v, "market");
    read(m, "alpha", rc.market.alpha, "market");
    rc.market.validate();
  }
  if (j.contains("tie_break")) {
    const auto& t = j.at("tie_break");
    check_keys(t, {"t", "r", "s"}, "tie_break");
    read(t, "t", rc.tie_break.t, "tie_break");
    read(t, "r", rc.tie_break.r, "tie_break");
    read(t, "s", rc.tie_break.s, "tie_break");
    rc.tie_break.validate();
  }
  read(j, "grid", rc.grid, ctx);
  read(j, "threads", rc.threads, ctx);
  if (j.contains("simulation")) {
    rc.simulation = simulation_from_json(j.at("simulation"));
  }
  if (j.contains("regression")) {
    const auto& r = j.at("regression");
    check_keys(r, {"spec", "variant", "max_lag_days"}, "regression");
    if (r.contains("spec")) {
      int spec = 0;
      read(r, "spec", spec, "regression");
      rc.regression.spec = spec;
    }
    if (r.contains("variant")) {
      std::string v;
      read(r, "variant", v, "regression");
      const auto parsed = econometrics::parse_variant(v);
      if (!parsed) throw InvalidConfig("regression.variant: unknown '" + v + "'");
      rc.regression.variant = *parsed;
    }
    read(r, "max_lag_days", rc.regression.max_lag_days, "regression");
  }
  if (j.contains("sellout")) {
    const auto& s = j.at("sellout");
    check_keys(s, {"capacity_per_hotel", "mean_bookings_per_day",
                   "forced_bookings_per_day", "seed"},
               "sellout");
    SelloutConfig so;
    read(s, "capacity_per_hotel", so.capacity_per_hotel, "sellout");
    read(s, "mean_bookings_per_day", so.process.mean_per_day, "sellout");
    if (s.contains("forced_bookings_per_day")) {
      long forced = 0;
      read(s, "forced_bookings_per_day", forced, "sellout");
      so.process.forced_per_day = forced;
    }
    read(s, "seed", so.process.seed, "sellout");
    if (so.capacity_per_hotel < 1) {
      throw InvalidConfig("sellout.capacity_per_hotel must be at least 1");
    }
    rc.sellout = so;
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidConfig("config '" + path.string() + "': " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace pricedisp::config
