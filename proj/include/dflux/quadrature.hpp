#pragma once

#include <cstddef>
#include <vector>

namespace dflux {

// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t points);

  std::size_t size() const { return nodes_.size(); }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(mid + half * nodes_[k]);
    return half * sum;
  }

  // Integral over [a, b], split at every breakpoint strictly inside.
  template <class F>
  double integrate_pieces(F&& f, double a, double b, const std::vector<double>& breaks) const {
    double sum = 0.0;
    double left = a;
    for (double x : breaks) {
      if (x <= left || x >= b) continue;
      sum += integrate(f, left, x);
      left = x;
    }
    return sum + integrate(f, left, b);
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

const GaussLegendre& gauss5();
const GaussLegendre& gauss16();

}  // namespace dflux
