#include "dflux/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dflux {

GaussLegendre::GaussLegendre(std::size_t points) : nodes_(points), weights_(points) {
  if (points == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
  const std::size_t n = points;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

const GaussLegendre& gauss5() {
  static const GaussLegendre rule(5);
  return rule;
}

const GaussLegendre& gauss16() {
  static const GaussLegendre rule(16);
  return rule;
}

}  // namespace dflux
