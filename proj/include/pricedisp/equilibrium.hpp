#pragma once

#include <functional>

namespace pricedisp::equilibrium {

// Primitives of one two-seller market: common marginal cost, consumer
// reservation value and the probability of the two-consumer demand state.
struct MarketParams {
  double c = 0.0;
  double v = 1.0;
  double alpha = 0.5;

  // Throws InvalidParams unless c >= 0, v > c and 0 < alpha < 1.
  void validate() const;

  double span() const { return v - c; }
};

// Tie-break probabilities used when both sellers post the same price.
//   t: the checked seller serves the lone low-state consumer
//   r, s: two / one units sold on a high-state tie without capacity limits;
//         the residual 1 - r - s is "no sale".
struct TieBreakRule {
  double t = 0.5;
  double r = 1.0 / 3.0;
  double s = 1.0 / 3.0;

  // Throws InvalidParams unless 0 < t < 1, 0 < r < 1 and 0 < s < 1 - r.
  void validate() const;
};

enum class DemandState { High, Low };

struct SupportInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  double cv = 0.0;
};

// The symmetric mixed equilibrium: each seller draws its price from
//   F(p) = ((p - c) - alpha (v - c)) / ((p - c)(1 - alpha))
// on [c + alpha (v - c), v]. Immutable once built.
class MixedStrategy {
 public:
  explicit MixedStrategy(const MarketParams& params);

  const MarketParams& params() const { return params_; }
  double lower() const { return lower_; }
  double upper() const { return params_.v; }

  // Extended with 0 below the support and 1 above it. Exact at both ends.
  double cdf(double p) const;
  // Analytic inverse of cdf; throws InvalidParams unless 0 <= u <= 1.
  double quantile(double u) const;
  // f(p) = alpha (v - c) / ((1 - alpha)(p - c)^2) on the support, else 0.
  double density(double p) const;

 private:
  MarketParams params_;
  double lower_;
};

using CdfFunction = std::function<double(double)>;

SupportInterval equilibrium_support(const MarketParams& params);
double equilibrium_cdf(const MarketParams& params, double p);
double equilibrium_quantile(const MarketParams& params, double u);

// Expected profit of a seller posting p against a rival that mixes according
// to an atomless opponent_cdf:
//   (p - c)(1 - F(p)) + alpha (p - c) F(p).
// Throws PriceOutOfRange unless c <= p <= v.
double expected_profit(const MarketParams& params, double p,
                       const CdfFunction& opponent_cdf);

// alpha (v - c): the profit every price on the support earns.
double equilibrium_profit(const MarketParams& params);

// Mean and standard deviation of the equilibrium price by adaptive Simpson
// quadrature of the density; throws IntegrationFailure if the 1e-10
// tolerance cannot be met.
Moments equilibrium_moments(const MarketParams& params);

}  // namespace pricedisp::equilibrium
