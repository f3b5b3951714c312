#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dflux {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
  Interval hull(const Interval& other) const;
  Interval hull(double x) const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class SegmentKind { linear, quadratic, user };

/// One strictly increasing flux function f^(i) together with its derivative.
///
/// Builtins: linear f(u) = a*u + b, quadratic f(u) = a*u^2/2 + b*u.
/// Everything else is a user pair of callables. Monotonicity can only be
/// verified on a working interval, so alpha() is zero until the segment has
/// been passed through validated_on().
class FluxSegment {
 public:
  static FluxSegment linear(double a, double b = 0.0);
  static FluxSegment quadratic(double a, double b = 0.0);
  static FluxSegment user(std::function<double(double)> eval,
                          std::function<double(double)> deriv,
                          std::string label = "user");

  double eval(double u) const;
  double deriv(double u) const;

  SegmentKind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::string& label() const { return label_; }
  double alpha() const { return alpha_; }

  // True when deriv is constant (affine flux).
  bool is_linear() const;

  // Inverse from a closed form, when the builtin has one.
  std::optional<double> analytic_inverse(double w) const;

  // Checks deriv >= alpha > 0 on 4097 samples of the interval and the
  // consistency of eval with deriv. Returns a copy with alpha set to 0.999
  // times the sampled minimum. Throws MonotonicityError.
  FluxSegment validated_on(const Interval& working) const;

 private:
  FluxSegment() = default;

  SegmentKind kind_ = SegmentKind::linear;
  double a_ = 1.0;
  double b_ = 0.0;
  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
  std::string label_;
  double alpha_ = 0.0;
};

/// f(k(x), .) for a piecewise constant coefficient k: segment i is active on
/// D_i = (xi_i, xi_{i+1}) with xi_0 = -inf and xi_{N+1} = +inf.
class PiecewiseFlux {
 public:
  PiecewiseFlux(std::vector<double> interfaces, std::vector<FluxSegment> segments);

  // Single flux on the whole line.
  explicit PiecewiseFlux(FluxSegment segment);

  std::size_t interface_count() const { return interfaces_.size(); }
  std::size_t segment_count() const { return segments_.size(); }
  const std::vector<double>& interfaces() const { return interfaces_; }
  const std::vector<FluxSegment>& segments() const { return segments_; }
  const FluxSegment& segment(std::size_t i) const { return segments_.at(i); }

  PiecewiseFlux validated_on(const Interval& working) const;

 private:
  std::vector<double> interfaces_;
  std::vector<FluxSegment> segments_;
};

// Index i of the subdomain D_i containing x. Throws InterfaceAmbiguityError
// when x sits exactly on an interface.
std::size_t segment_at(const PiecewiseFlux& pf, double x);

// Solves seg.eval(u) = w for u in bracket. Closed forms for the builtins,
// otherwise bisection safeguarded Newton to 1e-12 relative. Throws RangeError
// if w is not in the image of the bracket.
double invert(const FluxSegment& seg, double w, const Interval& bracket);

// Like invert, but grows the bracket around `hint` until it covers w.
double invert_unbounded(const FluxSegment& seg, double w, double hint);

// u |-> (f^(i))^{-1}(f^(i-1)(u)), the interface map at xi_i (i >= 1).
double interface_map(const PiecewiseFlux& pf, std::size_t i, double u,
                     const Interval& bracket);

// sup_i sup_{u in interval} f^(i)'(u) by 4097-point sampling.
double max_wave_speed(const PiecewiseFlux& pf, const Interval& interval);

// Range of states reachable in each subdomain: R_0 = data, R_i = data plus
// the image of R_{i-1} under the interface map at xi_i.
std::vector<Interval> subdomain_ranges(const PiecewiseFlux& pf, const Interval& data_range);

// Hull of subdomain_ranges. Throws DivergentRangeError if the endpoint
// iteration does not settle in 100 sweeps.
Interval invariant_interval(const PiecewiseFlux& pf, const Interval& data_range);

// Adapted entropy constants c_0 = c, c_i = (f^(i))^{-1}(f^(i-1)(c_{i-1})).
std::vector<double> adapted_constants(const PiecewiseFlux& pf, double c);

}  // namespace dflux
