#include <cmath>

#include "doctest.h"
#include "pricedisp/deviation.hpp"
#include "pricedisp/error.hpp"
#include "pricedisp/rng.hpp"

using namespace pricedisp;
using namespace pricedisp::equilibrium;

namespace {

struct Draw {
  MarketParams market;
  TieBreakRule tie;
};

Draw random_draw(rng::Stream& s) {
  Draw d;
  d.market.c = s.uniform(0.0, 100.0);
  d.market.v = d.market.c + s.uniform(0.1, 500.0);
  d.market.alpha = s.uniform(0.01, 0.99);
  d.tie.t = s.uniform(0.01, 0.99);
  d.tie.r = s.uniform(0.01, 0.98);
  d.tie.s = s.uniform(0.001, 0.999) * (1.0 - d.tie.r);
  return d;
}

}  // namespace

TEST_CASE("capacity constrained payoffs") {
  const MarketParams m{0.0, 1.0, 0.5};
  const TieBreakRule tie{0.5, 1.0 / 3, 1.0 / 3};
  constexpr auto g = GameVariant::CapacityConstrained;
  CHECK(pure_profit(g, m, tie, 0.6, 0.8) == doctest::Approx(0.6));
  CHECK(pure_profit(g, m, tie, 0.8, 0.6) == doctest::Approx(0.4));
  CHECK(pure_profit(g, m, tie, 0.8, 0.8) == doctest::Approx(0.8 * 0.75));
  CHECK(pure_profit(g, m, tie, 1.2, 0.8) == 0.0);
}

TEST_CASE("no symmetric pure equilibrium with capacity limits") {
  const MarketParams m{0.0, 1.0, 0.5};
  const TieBreakRule tie;
  const auto reports = check_no_pure_symmetric(m, tie, 101);
  REQUIRE(reports.size() == 101);
  for (const auto& r : reports) CHECK(r.profitable);

  const auto& at_cost = reports.front();
  CHECK(at_cost.candidate_price == 0.0);
  CHECK(at_cost.profit_at_candidate == 0.0);
  CHECK(at_cost.best_deviation_price > 0.0);
  CHECK(at_cost.profit_at_deviation ==
        doctest::Approx(m.alpha * (at_cost.best_deviation_price - m.c)));

  // undercut gain at P = v before the epsilon cost
  const auto& at_v = reports.back();
  const double eps = at_v.candidate_price - at_v.best_deviation_price;
  const double gain = at_v.profit_at_deviation - at_v.profit_at_candidate;
  CHECK(gain + eps == doctest::Approx((1 - m.alpha) * (1 - tie.t) * m.span()));
}

TEST_CASE("random tuples never report a missing deviation") {
  rng::Stream s(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_draw(s);
    for (const auto& r : check_no_pure_symmetric(d.market, d.tie, 101)) {
      REQUIRE(r.profitable);
      REQUIRE(r.profit_at_deviation > r.profit_at_candidate);
    }
  }
}

TEST_CASE("grid argument validation") {
  CHECK_THROWS_AS(check_no_pure_symmetric({0, 1, 0.5}, {}, 1), InvalidParams);
  CHECK_THROWS_AS(check_no_pure_symmetric({0, 1, 1.5}, {}, 11), InvalidParams);
  CHECK_THROWS_AS(check_no_pure_symmetric({0, 1, 0.5}, {1.0, 0.3, 0.3}, 11),
                  InvalidParams);
  const auto grid = price_grid({2.0, 7.0, 0.5}, 6);
  CHECK(grid.front() == 2.0);
  CHECK(grid.back() == 7.0);
  CHECK(grid[3] == doctest::Approx(5.0));
  const auto eps = epsilon_grid({2.0, 7.0, 0.5});
  REQUIRE(eps.size() == 8);
  CHECK(eps.front() == doctest::Approx(0.5));
  CHECK(eps.back() == doctest::Approx(5e-8));
}

TEST_CASE("marginal cost pricing without capacity limits") {
  const MarketParams m{3.0, 7.0, 0.4};
  const TieBreakRule tie{0.5, 1.0 / 3, 1.0 / 3};
  CHECK(pure_equilibrium_no_capacity(m) == 3.0);

  const auto at_c =
      verify_pure_equilibrium(GameVariant::Unconstrained, m, tie, 3.0, 1001);
  CHECK_FALSE(at_c.profitable);
  CHECK(at_c.profit_at_candidate == 0.0);
  CHECK(at_c.profit_at_deviation == 0.0);

  // undercut from P = 5
  const double eps = 1e-3;
  const double tie_profit = pure_profit(GameVariant::Unconstrained, m, tie, 5.0, 5.0);
  const double undercut =
      pure_profit(GameVariant::Unconstrained, m, tie, 5.0 - eps, 5.0);
  CHECK(undercut == doctest::Approx((1 + m.alpha) * (5.0 - 3.0 - eps)));
  CHECK(undercut > tie_profit);

  const auto scan =
      scan_symmetric_candidates(GameVariant::Unconstrained, m, tie, 1001);
  CHECK_FALSE(scan.front().profitable);
  for (std::size_t i = 1; i < scan.size(); ++i) CHECK(scan[i].profitable);
}

TEST_CASE("known demand state equilibria") {
  const MarketParams m{0.0, 1.0, 0.5};
  const TieBreakRule tie;
  CHECK(pure_equilibrium_known_state(m, DemandState::High) == 1.0);
  CHECK(pure_equilibrium_known_state(m, DemandState::Low) == 0.0);
  for (auto state : {DemandState::High, DemandState::Low}) {
    const auto r = verify_pure_equilibrium(
        known_state_game(state), m, tie, pure_equilibrium_known_state(m, state),
        1001);
    CHECK_FALSE(r.profitable);
  }
  // High state: every lower price sells anyway and earns strictly less
  for (double p : price_grid(m, 101)) {
    if (p == 1.0) continue;
    CHECK(pure_profit(GameVariant::KnownHighDemand, m, tie, p, 1.0) < 1.0);
  }
}

TEST_CASE("pure equilibria hold for random tuples") {
  rng::Stream s(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_draw(s);
    const double pc = pure_equilibrium_no_capacity(d.market);
    REQUIRE_FALSE(verify_pure_equilibrium(GameVariant::Unconstrained, d.market,
                                          d.tie, pc, 1001).profitable);
    for (auto state : {DemandState::High, DemandState::Low}) {
      REQUIRE_FALSE(verify_pure_equilibrium(
                        known_state_game(state), d.market, d.tie,
                        pure_equilibrium_known_state(d.market, state), 1001)
                        .profitable);
    }
    const auto scan =
        scan_symmetric_candidates(GameVariant::Unconstrained, d.market, d.tie, 1001);
    for (std::size_t i = 1; i < scan.size(); ++i) REQUIRE(scan[i].profitable);
  }
}

TEST_CASE("mixed strategy admits no profitable pure deviation") {
  rng::Stream s(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_draw(s);
    const auto r = verify_mixed_equilibrium(d.market, 1001);
    CHECK_FALSE(r.profitable);
    CHECK(r.profit_at_deviation <=
          r.profit_at_candidate + profit_margin(d.market));
  }
}
