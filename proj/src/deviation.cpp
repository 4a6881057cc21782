#include "pricedisp/deviation.hpp"

#include <cmath>

#include "pricedisp/error.hpp"

namespace pricedisp::equilibrium {

namespace {

constexpr int kEpsilonExponents = 8;
constexpr double kMarginFactor = 1e-12;

void require_grid(std::size_t grid_size) {
  if (grid_size < 2) {
    throw InvalidParams("price grid needs at least 2 points");
  }
}

// Folds one deviation into the running best, keeping the earliest best.
void consider(DeviationReport& report, double price, double profit) {
  if (profit > report.profit_at_deviation) {
    report.profit_at_deviation = profit;
    report.best_deviation_price = price;
  }
}

DeviationReport start_report(double candidate, double candidate_profit,
                             double first_price, double first_profit) {
  DeviationReport report;
  report.candidate_price = candidate;
  report.profit_at_candidate = candidate_profit;
  report.best_deviation_price = first_price;
  report.profit_at_deviation = first_profit;
  return report;
}

void finish(DeviationReport& report, const MarketParams& params) {
  report.profitable = report.profit_at_deviation >
                      report.profit_at_candidate + profit_margin(params);
}

DeviationReport best_deviation(GameVariant game, const MarketParams& params,
                               const TieBreakRule& tie, double candidate,
                               const std::vector<double>& grid) {
  const double at_candidate =
      pure_profit(game, params, tie, candidate, candidate);
  DeviationReport report = start_report(candidate, at_candidate, candidate,
                                        at_candidate);
  for (double price : grid) {
    if (price == candidate) continue;
    consider(report, price, pure_profit(game, params, tie, price, candidate));
  }
  for (double eps : epsilon_grid(params)) {
    for (double price : {candidate - eps, candidate + eps}) {
      if (price < params.c || price > params.v) continue;
      consider(report, price, pure_profit(game, params, tie, price, candidate));
    }
  }
  finish(report, params);
  return report;
}

}  // namespace

double pure_profit(GameVariant game, const MarketParams& params,
                   const TieBreakRule& tie, double own, double rival) {
  if (own > params.v) return 0.0;
  const double markup = own - params.c;
  const double a = params.alpha;
  switch (game) {
    case GameVariant::CapacityConstrained:
      // Undercutting sells the single unit in both states; posting above
      // the rival sells only when the rival's unit cannot cover two buyers.
      if (own < rival) return markup;
      if (own > rival) return a * markup;
      return (a + (1.0 - a) * tie.t) * markup;
    case GameVariant::Unconstrained:
      if (own < rival) return (1.0 + a) * markup;
      if (own > rival) return 0.0;
      return (a * (2.0 * tie.r + tie.s) + (1.0 - a) * tie.t) * markup;
    case GameVariant::KnownHighDemand:
      return markup;
    case GameVariant::KnownLowDemand:
      if (own < rival) return markup;
      if (own > rival) return 0.0;
      return tie.t * markup;
  }
  return 0.0;
}

std::vector<double> epsilon_grid(const MarketParams& params) {
  std::vector<double> eps;
  eps.reserve(kEpsilonExponents);
  for (int k = 1; k <= kEpsilonExponents; ++k) {
    eps.push_back(std::pow(10.0, -k) * params.span());
  }
  return eps;
}

std::vector<double> price_grid(const MarketParams& params,
                               std::size_t grid_size) {
  require_grid(grid_size);
  std::vector<double> grid(grid_size);
  const double step = params.span() / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    grid[i] = params.c + static_cast<double>(i) * step;
  }
  grid.front() = params.c;
  grid.back() = params.v;
  return grid;
}

double profit_margin(const MarketParams& params) {
  return kMarginFactor * params.span();
}

std::vector<DeviationReport> check_no_pure_symmetric(
    const MarketParams& params, const TieBreakRule& tie,
    std::size_t grid_size) {
  params.validate();
  tie.validate();
  const auto grid = price_grid(params, grid_size);
  const auto eps_grid = epsilon_grid(params);
  constexpr auto game = GameVariant::CapacityConstrained;

  std::vector<DeviationReport> reports;
  reports.reserve(grid.size());
  for (double candidate : grid) {
    const double at_candidate =
        pure_profit(game, params, tie, candidate, candidate);
    DeviationReport report =
        start_report(candidate, at_candidate, candidate, at_candidate);
    for (double eps : eps_grid) {
      // At marginal cost the rival's capacity limit leaves a high-state
      // buyer for a slightly higher price; anywhere else undercut.
      const double price =
          candidate == params.c ? params.c + eps : candidate - eps;
      if (price <= params.c && candidate != params.c) continue;
      consider(report, price, pure_profit(game, params, tie, price, candidate));
    }
    finish(report, params);
    if (!report.profitable) {
      for (double price : grid) {
        if (price == candidate) continue;
        consider(report, price,
                 pure_profit(game, params, tie, price, candidate));
      }
      finish(report, params);
    }
    reports.push_back(report);
  }
  return reports;
}

std::vector<DeviationReport> scan_symmetric_candidates(
    GameVariant game, const MarketParams& params, const TieBreakRule& tie,
    std::size_t grid_size) {
  params.validate();
  tie.validate();
  const auto grid = price_grid(params, grid_size);
  std::vector<DeviationReport> reports;
  reports.reserve(grid.size());
  for (double candidate : grid) {
    reports.push_back(best_deviation(game, params, tie, candidate, grid));
  }
  return reports;
}

DeviationReport verify_pure_equilibrium(GameVariant game,
                                        const MarketParams& params,
                                        const TieBreakRule& tie, double price,
                                        std::size_t grid_size) {
  params.validate();
  tie.validate();
  return best_deviation(game, params, tie, price,
                        price_grid(params, grid_size));
}

double pure_equilibrium_no_capacity(const MarketParams& params) {
  params.validate();
  return params.c;
}

double pure_equilibrium_known_state(const MarketParams& params,
                                    DemandState state) {
  params.validate();
  return state == DemandState::High ? params.v : params.c;
}

GameVariant known_state_game(DemandState state) {
  return state == DemandState::High ? GameVariant::KnownHighDemand
                                    : GameVariant::KnownLowDemand;
}

DeviationReport verify_mixed_equilibrium(const MarketParams& params,
                                         std::size_t grid_size) {
  const MixedStrategy strategy(params);
  const auto grid = price_grid(params, grid_size);
  const auto rival = [&](double p) { return strategy.cdf(p); };
  const double target = equilibrium_profit(params);
  DeviationReport report =
      start_report(strategy.lower(), target, grid.front(),
                   expected_profit(params, grid.front(), rival));
  for (double price : grid) {
    consider(report, price, expected_profit(params, price, rival));
  }
  finish(report, params);
  return report;
}

}  // namespace pricedisp::equilibrium
