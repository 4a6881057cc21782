#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "pricedisp/analysis.hpp"
#include "pricedisp/equilibrium.hpp"
#include "pricedisp/simulator.hpp"

namespace pricedisp::config {

struct SelloutConfig {
  std::size_t capacity_per_hotel = simulator::kUnlimitedCapacity;
  simulator::BookingProcess process;
};

struct RegressionConfig {
  std::optional<int> spec;
  econometrics::Variant variant = econometrics::Variant::Baseline;
  int max_lag_days = 14;
};

// Parameter blocks shared by the subcommands. Every block is optional; a
// missing block means defaults.
struct RunConfig {
  equilibrium::MarketParams market;
  equilibrium::TieBreakRule tie_break;
  std::size_t grid = 101;
  simulator::SimulationConfig simulation = simulator::SimulationConfig::desk_scale();
  RegressionConfig regression;
  std::optional<SelloutConfig> sellout;
  unsigned threads = 1;
};

// Unknown keys anywhere are rejected with InvalidConfig.
simulator::SimulationConfig simulation_from_json(const nlohmann::json& j);
nlohmann::json simulation_to_json(const simulator::SimulationConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace pricedisp::config
