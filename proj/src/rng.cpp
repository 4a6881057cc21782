#include "pricedisp/rng.hpp"

#include <cmath>

namespace pricedisp::rng {

std::int64_t Stream::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  const double u = uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  // The tail cap guards against u landing above the rounded total mass.
  while (u >= cdf && k < 10000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

}  // namespace pricedisp::rng
