#include "dflux/flux_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dflux/errors.hpp"

namespace dflux {

namespace {

constexpr int kSampleIntervals = 4096;  // 4097 points including both ends

double sample_point(const Interval& iv, int k) {
  if (k == kSampleIntervals) return iv.hi;
  return iv.lo + iv.width() * (static_cast<double>(k) / kSampleIntervals);
}

double inversion_tolerance(double w) { return 1e-12 * std::max(1.0, std::abs(w)); }

double bisect_newton(const FluxSegment& seg, double w, double lo, double hi) {
  const double tol = 0.25 * inversion_tolerance(w);
  double x = 0.5 * (lo + hi);
  double best = x;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 400; ++iter) {
    const double r = seg.eval(x) - w;
    if (std::abs(r) < best_residual) {
      best_residual = std::abs(r);
      best = x;
    }
    if (std::abs(r) <= tol) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max({1.0, std::abs(lo), std::abs(hi)})) {
      break;
    }
    const double d = seg.deriv(x);
    double next = d > 0.0 ? x - r / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return best;
}

}  // namespace

Interval Interval::hull(const Interval& other) const {
  return {std::min(lo, other.lo), std::max(hi, other.hi)};
}

Interval Interval::hull(double x) const { return {std::min(lo, x), std::max(hi, x)}; }

FluxSegment FluxSegment::linear(double a, double b) {
  FluxSegment s;
  s.kind_ = SegmentKind::linear;
  s.a_ = a;
  s.b_ = b;
  s.label_ = "linear";
  return s;
}

FluxSegment FluxSegment::quadratic(double a, double b) {
  FluxSegment s;
  s.kind_ = SegmentKind::quadratic;
  s.a_ = a;
  s.b_ = b;
  s.label_ = "quadratic";
  return s;
}

FluxSegment FluxSegment::user(std::function<double(double)> eval,
                              std::function<double(double)> deriv, std::string label) {
  if (!eval || !deriv) throw ValidationError("user flux segment needs both eval and deriv");
  FluxSegment s;
  s.kind_ = SegmentKind::user;
  s.eval_ = std::move(eval);
  s.deriv_ = std::move(deriv);
  s.label_ = std::move(label);
  return s;
}

double FluxSegment::eval(double u) const {
  switch (kind_) {
    case SegmentKind::linear:
      return a_ * u + b_;
    case SegmentKind::quadratic:
      return 0.5 * a_ * u * u + b_ * u;
    case SegmentKind::user:
      break;
  }
  return eval_(u);
}

double FluxSegment::deriv(double u) const {
  switch (kind_) {
    case SegmentKind::linear:
      return a_;
    case SegmentKind::quadratic:
      return a_ * u + b_;
    case SegmentKind::user:
      break;
  }
  return deriv_(u);
}

bool FluxSegment::is_linear() const {
  return kind_ == SegmentKind::linear || (kind_ == SegmentKind::quadratic && a_ == 0.0);
}

std::optional<double> FluxSegment::analytic_inverse(double w) const {
  if (is_linear()) {
    const double slope = kind_ == SegmentKind::linear ? a_ : b_;
    const double offset = kind_ == SegmentKind::linear ? b_ : 0.0;
    if (slope == 0.0) return std::nullopt;
    return (w - offset) / slope;
  }
  if (kind_ == SegmentKind::quadratic) {
    // Root of a u^2/2 + b u = w on the branch where a u + b >= 0.
    if (b_ == 0.0) {
      const double q = 2.0 * w / a_;
      if (q < 0.0) return std::nullopt;
      return a_ > 0.0 ? std::sqrt(q) : -std::sqrt(q);
    }
    const double disc = b_ * b_ + 2.0 * a_ * w;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    if (b_ + s > 0.0) return 2.0 * w / (b_ + s);
    return (s - b_) / a_;
  }
  return std::nullopt;
}

FluxSegment FluxSegment::validated_on(const Interval& working) const {
  if (!(working.lo <= working.hi)) throw ValidationError("empty working interval");
  double min_deriv = std::numeric_limits<double>::infinity();
  double argmin = working.lo;
  for (int k = 0; k <= kSampleIntervals; ++k) {
    const double u = sample_point(working, k);
    const double d = deriv(u);
    if (!(d >= min_deriv)) {
      min_deriv = d;
      argmin = u;
    }
    if (kind_ == SegmentKind::user) {
      const double h = 6e-6 * std::max(1.0, std::abs(u));
      const double fd = (eval(u + h) - eval(u - h)) / (2.0 * h);
      if (!(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)))) {
        std::ostringstream msg;
        msg << "flux segment '" << label_ << "': derivative inconsistent with eval at u=" << u
            << " (deriv " << d << ", finite difference " << fd << ")";
        throw MonotonicityError(msg.str());
      }
    }
  }
  if (!(min_deriv > 0.0)) {
    std::ostringstream msg;
    msg << "flux segment '" << label_ << "' is not strictly increasing on [" << working.lo
        << ", " << working.hi << "]: f'(" << argmin << ") = " << min_deriv;
    throw MonotonicityError(msg.str());
  }
  FluxSegment out = *this;
  out.alpha_ = 0.999 * min_deriv;
  return out;
}

PiecewiseFlux::PiecewiseFlux(std::vector<double> interfaces, std::vector<FluxSegment> segments)
    : interfaces_(std::move(interfaces)), segments_(std::move(segments)) {
  if (segments_.size() != interfaces_.size() + 1) {
    std::ostringstream msg;
    msg << "piecewise flux needs " << interfaces_.size() + 1 << " segments for "
        << interfaces_.size() << " interfaces, got " << segments_.size();
    throw ValidationError(msg.str());
  }
  for (std::size_t i = 1; i < interfaces_.size(); ++i) {
    if (!(interfaces_[i - 1] < interfaces_[i]))
      throw ValidationError("flux interfaces must be strictly increasing");
  }
}

PiecewiseFlux::PiecewiseFlux(FluxSegment segment) : segments_{std::move(segment)} {}

PiecewiseFlux PiecewiseFlux::validated_on(const Interval& working) const {
  std::vector<FluxSegment> checked;
  checked.reserve(segments_.size());
  for (const auto& s : segments_) checked.push_back(s.validated_on(working));
  return PiecewiseFlux(interfaces_, std::move(checked));
}

std::size_t segment_at(const PiecewiseFlux& pf, double x) {
  const auto& xi = pf.interfaces();
  const auto it = std::lower_bound(xi.begin(), xi.end(), x);
  if (it != xi.end() && *it == x) {
    std::ostringstream msg;
    msg << "x = " << x << " lies on flux interface " << (it - xi.begin()) + 1;
    throw InterfaceAmbiguityError(msg.str());
  }
  return static_cast<std::size_t>(it - xi.begin());
}

double invert(const FluxSegment& seg, double w, const Interval& bracket) {
  const double tol = inversion_tolerance(w);
  if (auto u = seg.analytic_inverse(w)) {
    const double slack = 1e-12 * std::max(1.0, std::abs(*u));
    if (bracket.contains(*u, slack)) return std::clamp(*u, bracket.lo, bracket.hi);
  }
  const double flo = seg.eval(bracket.lo);
  const double fhi = seg.eval(bracket.hi);
  if (w < flo - tol || w > fhi + tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cannot invert flux '" << seg.label() << "' at w = " << w << ": image of ["
        << bracket.lo << ", " << bracket.hi << "] is [" << flo << ", " << fhi << "]";
    throw RangeError(msg.str());
  }
  if (w <= flo) return bracket.lo;
  if (w >= fhi) return bracket.hi;
  return bisect_newton(seg, w, bracket.lo, bracket.hi);
}

double invert_unbounded(const FluxSegment& seg, double w, double hint) {
  if (auto u = seg.analytic_inverse(w)) return *u;
  double lo = hint;
  double hi = hint;
  double step = 1e-3 * std::max(1.0, std::abs(hint));
  for (int k = 0; seg.eval(lo) > w; ++k) {
    if (k == 200) throw RangeError("flux '" + seg.label() + "' never drops below target");
    lo -= step;
    step *= 2.0;
  }
  step = 1e-3 * std::max(1.0, std::abs(hint));
  for (int k = 0; seg.eval(hi) < w; ++k) {
    if (k == 200) throw RangeError("flux '" + seg.label() + "' never reaches target");
    hi += step;
    step *= 2.0;
  }
  return invert(seg, w, {lo, hi});
}

double interface_map(const PiecewiseFlux& pf, std::size_t i, double u, const Interval& bracket) {
  return invert(pf.segment(i), pf.segment(i - 1).eval(u), bracket);
}

double max_wave_speed(const PiecewiseFlux& pf, const Interval& interval) {
  double speed = -std::numeric_limits<double>::infinity();
  for (const auto& seg : pf.segments()) {
    for (int k = 0; k <= kSampleIntervals; ++k)
      speed = std::max(speed, seg.deriv(sample_point(interval, k)));
  }
  return speed;
}

std::vector<Interval> subdomain_ranges(const PiecewiseFlux& pf, const Interval& data_range) {
  std::vector<Interval> ranges(pf.segment_count(), data_range);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 1; i < ranges.size(); ++i) {
      const Interval& prev = ranges[i - 1];
      const auto& left = pf.segment(i - 1);
      const auto& right = pf.segment(i);
      const Interval image{invert_unbounded(right, left.eval(prev.lo), prev.lo),
                           invert_unbounded(right, left.eval(prev.hi), prev.hi)};
      const Interval next = data_range.hull(image);
      change = std::max({change, std::abs(next.lo - ranges[i].lo),
                         std::abs(next.hi - ranges[i].hi)});
      ranges[i] = next;
    }
    if (change < 1e-12) return ranges;
  }
  throw DivergentRangeError("invariant interval iteration did not converge in 100 sweeps");
}

Interval invariant_interval(const PiecewiseFlux& pf, const Interval& data_range) {
  Interval out = data_range;
  for (const auto& r : subdomain_ranges(pf, data_range)) out = out.hull(r);
  return out;
}

std::vector<double> adapted_constants(const PiecewiseFlux& pf, double c) {
  std::vector<double> out{c};
  for (std::size_t i = 1; i < pf.segment_count(); ++i) {
    out.push_back(invert_unbounded(pf.segment(i), pf.segment(i - 1).eval(out.back()), out.back()));
  }
  return out;
}

}  // namespace dflux
