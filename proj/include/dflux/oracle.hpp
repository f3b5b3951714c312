#pragma once

#include <functional>
#include <vector>

#include "dflux/flux_model.hpp"
#include "dflux/grid.hpp"

namespace dflux {

// Exact entropy solution on the whole line, valid for t in `validity`.
struct ExactSolution {
  std::function<double(double, double)> evaluator;
  Interval validity{0.0, 0.0};
  // Positions of jumps and kinks at time t; cell averages split there.
  std::function<std::vector<double>(double)> breakpoints;

  double operator()(double x, double t) const { return evaluator(x, t); }
  std::vector<double> kinks(double t) const {
    return breakpoints ? breakpoints(t) : std::vector<double>{};
  }
};

// Riemann data (uL | uR at jump_pos < xi_1) for a two-segment flux. The
// state on D_1 at t = 0 is the transmitted value (f^(1))^{-1}(f^(0)(uR)).
// Segment waves: contact for linear, shock or rarefaction for convex. The
// wave reaching xi_1 at time t* is re-solved on D_1 as a Riemann problem
// centered at (xi_1, t*). Throws UnsupportedOracleError for segments that are
// neither linear nor convex between the states involved.
ExactSolution exact_two_flux_riemann(const PiecewiseFlux& pf, double uL, double uR,
                                     double jump_pos);

// u(x, t) = u0(x - speed t).
ExactSolution exact_linear_advection(double speed, InitialDatum u0);

}  // namespace dflux
