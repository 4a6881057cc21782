#pragma once

#include <cstddef>
#include <vector>

#include "pricedisp/equilibrium.hpp"

namespace pricedisp::equilibrium {

// Which pricing game a pure-strategy payoff refers to. The first is the
// model proper; the others relax one assumption each.
enum class GameVariant {
  CapacityConstrained,  // one unit per seller, demand state unknown
  Unconstrained,        // unlimited units, demand state unknown
  KnownHighDemand,      // one unit per seller, two consumers for sure
  KnownLowDemand,       // one unit per seller, one consumer for sure
};

struct DeviationReport {
  double candidate_price = 0.0;
  double best_deviation_price = 0.0;
  double profit_at_candidate = 0.0;
  double profit_at_deviation = 0.0;
  bool profitable = false;
};

// Expected profit of the checked seller posting `own` while the rival posts
// `rival`. Prices above v sell nothing.
double pure_profit(GameVariant game, const MarketParams& params,
                   const TieBreakRule& tie, double own, double rival);

// {10^-k (v - c) : k = 1..8}, largest first.
std::vector<double> epsilon_grid(const MarketParams& params);

// grid_size evenly spaced prices from c to v inclusive (v exact).
std::vector<double> price_grid(const MarketParams& params,
                               std::size_t grid_size);

// Margin a deviation must clear to count as profitable: 1e-12 (v - c).
double profit_margin(const MarketParams& params);

// For each symmetric candidate (P, P) on the price grid, searches the
// undercut P - eps (P > c) or the raise c + eps (P = c) over epsilon_grid.
// If no epsilon clears the margin the price grid is scanned as well.
std::vector<DeviationReport> check_no_pure_symmetric(
    const MarketParams& params, const TieBreakRule& tie,
    std::size_t grid_size);

// For each symmetric candidate on the price grid of `game`, the best
// deviation over the price grid and the epsilon neighbourhood of the
// candidate.
std::vector<DeviationReport> scan_symmetric_candidates(
    GameVariant game, const MarketParams& params, const TieBreakRule& tie,
    std::size_t grid_size);

// Best deviation from the symmetric profile (price, price) over the price
// grid plus the epsilon neighbourhood of `price`.
DeviationReport verify_pure_equilibrium(GameVariant game,
                                        const MarketParams& params,
                                        const TieBreakRule& tie, double price,
                                        std::size_t grid_size);

// Unlimited capacity: the unique symmetric pure equilibrium is (c, c).
double pure_equilibrium_no_capacity(const MarketParams& params);

// Demand state known in advance: (v, v) when high, (c, c) when low.
double pure_equilibrium_known_state(const MarketParams& params,
                                    DemandState state);

GameVariant known_state_game(DemandState state);

// Best pure deviation against the mixed equilibrium over the price grid.
// candidate_price is the support's lower end; profit_at_candidate is
// alpha (v - c).
DeviationReport verify_mixed_equilibrium(const MarketParams& params,
                                         std::size_t grid_size);

}  // namespace pricedisp::equilibrium
