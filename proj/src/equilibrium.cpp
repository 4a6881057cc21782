#include "pricedisp/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pricedisp/error.hpp"

namespace pricedisp::equilibrium {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr int kMaxSimpsonDepth = 60;

struct SimpsonState {
  double integral;
  bool converged;
};

double simpson_rule(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// Richardson-corrected adaptive Simpson. converged turns false if any
// branch hits the depth cap before meeting its share of the tolerance.
template <typename F>
double simpson_recurse(const F& f, double a, double fa, double b, double fb,
                       double m, double fm, double whole, double tol,
                       int depth, bool& converged) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, fa, flm, m, fm);
  const double right = simpson_rule(m, fm, frm, b, fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth >= kMaxSimpsonDepth) {
    converged = false;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1,
                         converged) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                         depth + 1, converged);
}

template <typename F>
SimpsonState adaptive_simpson(const F& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson_rule(a, fa, fm, b, fb);
  bool converged = true;
  const double value =
      simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, 0, converged);
  return {value, converged};
}

}  // namespace

void MarketParams::validate() const {
  if (!std::isfinite(c) || !std::isfinite(v) || !std::isfinite(alpha)) {
    throw InvalidParams("market parameters must be finite");
  }
  if (c < 0.0) {
    std::ostringstream os;
    os << "marginal cost must be nonnegative, got c=" << c;
    throw InvalidParams(os.str());
  }
  if (!(v > c)) {
    std::ostringstream os;
    os << "reservation value must exceed marginal cost, got c=" << c
       << " v=" << v;
    throw InvalidParams(os.str());
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << "high-demand probability must lie in (0, 1), got alpha=" << alpha;
    throw InvalidParams(os.str());
  }
}

void TieBreakRule::validate() const {
  if (!(t > 0.0 && t < 1.0)) {
    throw InvalidParams("tie-break t must lie in (0, 1)");
  }
  if (!(r > 0.0 && r < 1.0)) {
    throw InvalidParams("tie-break r must lie in (0, 1)");
  }
  if (!(s > 0.0 && s < 1.0 - r)) {
    throw InvalidParams("tie-break s must lie in (0, 1 - r)");
  }
}

MixedStrategy::MixedStrategy(const MarketParams& params) : params_(params) {
  params_.validate();
  lower_ = params_.c + params_.alpha * params_.span();
}

double MixedStrategy::cdf(double p) const {
  if (p <= lower_) return 0.0;
  if (p >= params_.v) return 1.0;
  const double x = p - params_.c;
  const double floor_markup = params_.alpha * params_.span();
  const double value = (x - floor_markup) / (x * (1.0 - params_.alpha));
  return std::clamp(value, 0.0, 1.0);
}

double MixedStrategy::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw InvalidParams("quantile level must lie in [0, 1]");
  }
  if (u == 0.0) return lower_;
  if (u == 1.0) return params_.v;
  const double markup =
      params_.alpha * params_.span() / (1.0 - u * (1.0 - params_.alpha));
  return std::clamp(params_.c + markup, lower_, params_.v);
}

double MixedStrategy::density(double p) const {
  if (p < lower_ || p > params_.v) return 0.0;
  const double x = p - params_.c;
  return params_.alpha * params_.span() / ((1.0 - params_.alpha) * x * x);
}

SupportInterval equilibrium_support(const MarketParams& params) {
  const MixedStrategy strategy(params);
  return {strategy.lower(), strategy.upper()};
}

double equilibrium_cdf(const MarketParams& params, double p) {
  return MixedStrategy(params).cdf(p);
}

double equilibrium_quantile(const MarketParams& params, double u) {
  return MixedStrategy(params).quantile(u);
}

double expected_profit(const MarketParams& params, double p,
                       const CdfFunction& opponent_cdf) {
  params.validate();
  if (!(p >= params.c && p <= params.v)) {
    std::ostringstream os;
    os << "price " << p << " outside [" << params.c << ", " << params.v
       << "]";
    throw PriceOutOfRange(os.str());
  }
  const double markup = p - params.c;
  const double undercut_by_rival = opponent_cdf(p);
  return markup * (1.0 - undercut_by_rival) +
         params.alpha * markup * undercut_by_rival;
}

double equilibrium_profit(const MarketParams& params) {
  params.validate();
  return params.alpha * params.span();
}

Moments equilibrium_moments(const MarketParams& params) {
  const MixedStrategy strategy(params);
  const double a = strategy.lower();
  const double c = params.c;

  // Integrate in markup x = p - c so the mean does not carry c's magnitude.
  const double scale = params.span();
  const double xa = params.alpha * scale;
  const double xb = scale;
  const double density_scale = params.alpha * scale / (1.0 - params.alpha);
  const auto density = [&](double x) { return density_scale / (x * x); };

  const auto mass = adaptive_simpson(density, xa, xb, kQuadratureTolerance);
  const auto first = adaptive_simpson(
      [&](double x) { return x * density(x); }, xa, xb,
      kQuadratureTolerance * scale);
  if (!mass.converged || !first.converged) {
    throw IntegrationFailure("equilibrium moments: quadrature did not converge");
  }
  // The distribution is atomless: F(lower) = 0 and the density carries all
  // of the mass.
  if (strategy.cdf(a) != 0.0 ||
      std::abs(mass.integral - 1.0) > 1e3 * kQuadratureTolerance) {
    std::ostringstream os;
    os << "equilibrium moments: density mass " << mass.integral
       << " differs from 1";
    throw IntegrationFailure(os.str());
  }
  const double mean_markup = first.integral;
  const auto second = adaptive_simpson(
      [&](double x) {
        const double d = x - mean_markup;
        return d * d * density(x);
      },
      xa, xb, kQuadratureTolerance * scale * scale);
  if (!second.converged) {
    throw IntegrationFailure("equilibrium moments: quadrature did not converge");
  }
  Moments m;
  m.mean = c + mean_markup;
  m.std = std::sqrt(std::max(0.0, second.integral));
  m.cv = m.std / m.mean;
  return m;
}

}  // namespace pricedisp::equilibrium
