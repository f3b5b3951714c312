#include "dflux/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "dflux/errors.hpp"

namespace dflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Shape { linear, convex };

Shape classify(const FluxSegment& seg, double lo, double hi) {
  if (seg.is_linear()) return Shape::linear;
  if (seg.kind() == SegmentKind::quadratic) {
    if (seg.a() > 0.0) return Shape::convex;
    throw UnsupportedOracleError("concave quadratic segment is not supported by the oracle");
  }
  constexpr int kProbes = 256;
  bool constant = true;
  bool nondecreasing = true;
  const double d0 = seg.deriv(lo);
  double prev = d0;
  for (int k = 1; k <= kProbes; ++k) {
    const double d = seg.deriv(lo + (hi - lo) * (static_cast<double>(k) / kProbes));
    const double tol = 1e-12 * std::max(1.0, std::abs(d));
    if (std::abs(d - d0) > tol) constant = false;
    if (d < prev - tol) nondecreasing = false;
    prev = d;
  }
  if (constant) return Shape::linear;
  if (nondecreasing) return Shape::convex;
  throw UnsupportedOracleError("segment '" + seg.label() +
                               "' is neither linear nor convex between the Riemann states");
}

// Solution of f'(u) = s for u between lo and hi, f convex.
double inverse_speed(const FluxSegment& seg, double s, double lo, double hi) {
  if (seg.kind() == SegmentKind::quadratic) return std::clamp((s - seg.b()) / seg.a(), lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (seg.deriv(m) < s) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

// Riemann wave of one segment, centered at (xc, tc).
struct Wave {
  enum class Type { none, jump, fan };
  Type type = Type::none;
  const FluxSegment* seg = nullptr;
  double xc = 0.0;
  double tc = 0.0;
  double ul = 0.0;
  double ur = 0.0;
  double speed = 0.0;  // jump
  double s_lo = 0.0;   // fan foot (slowest)
  double s_hi = 0.0;   // fan head (fastest)

  double value(double x, double t) const {
    const double tau = t - tc;
    switch (type) {
      case Type::none:
        return ur;
      case Type::jump:
        return x < xc + speed * tau ? ul : ur;
      case Type::fan: {
        if (tau <= 0.0) return x < xc ? ul : ur;
        const double xi = (x - xc) / tau;
        if (xi <= s_lo) return ul;
        if (xi >= s_hi) return ur;
        return inverse_speed(*seg, xi, std::min(ul, ur), std::max(ul, ur));
      }
    }
    return ur;
  }

  void edges(double t, std::vector<double>& out) const {
    const double tau = t - tc;
    if (tau <= 0.0 || type == Type::none) return;
    if (type == Type::jump) {
      out.push_back(xc + speed * tau);
    } else {
      out.push_back(xc + s_lo * tau);
      out.push_back(xc + s_hi * tau);
    }
  }
};

Wave make_wave(const FluxSegment& seg, double ul, double ur, double xc, double tc) {
  Wave w;
  w.seg = &seg;
  w.xc = xc;
  w.tc = tc;
  w.ul = ul;
  w.ur = ur;
  if (ul == ur) return w;
  const Shape shape = classify(seg, std::min(ul, ur), std::max(ul, ur));
  if (shape == Shape::linear) {
    w.type = Wave::Type::jump;
    w.speed = seg.deriv(ul);
  } else if (ul > ur) {
    w.type = Wave::Type::jump;
    w.speed = (seg.eval(ul) - seg.eval(ur)) / (ul - ur);
  } else {
    w.type = Wave::Type::fan;
    w.s_lo = seg.deriv(ul);
    w.s_hi = seg.deriv(ur);
  }
  return w;
}

struct TwoFluxRiemann {
  FluxSegment left_seg;
  FluxSegment right_seg;
  double xi = 0.0;
  double x0 = 0.0;
  double uL = 0.0;
  double uR = 0.0;
  double uL1 = 0.0;  // transmitted states on D_1
  double uR1 = 0.0;
  Wave left;
  Wave right;            // valid for t > t_hit when `left` is a jump
  double t_hit = kInf;   // left jump reaches xi
  bool fan_transport = false;
  double t_head = kInf;  // fan head / foot reach xi
  double t_tail = kInf;

  double transmit(double u) const {
    return invert_unbounded(right_seg, left_seg.eval(u), u);
  }

  double left_value(double x, double t) const {
    if (t <= 0.0) return x < x0 ? uL : uR;
    return left.value(x, t);
  }

  double value(double x, double t) const {
    if (x < xi) return left_value(x, t);
    if (fan_transport) {
      const double tau = t - (x - xi) / right_seg.deriv(uR1);
      if (tau <= 0.0) return uR1;
      return transmit(left_value(std::nextafter(xi, -kInf), tau));
    }
    if (t <= t_hit) return uR1;
    return right.value(x, t);
  }

  std::vector<double> breakpoints(double t) const {
    std::vector<double> raw;
    left.edges(t, raw);
    std::vector<double> out;
    for (double x : raw) {
      if (x < xi) out.push_back(x);
    }
    out.push_back(xi);
    if (fan_transport) {
      const double a1 = right_seg.deriv(uR1);
      for (double th : {t_head, t_tail}) {
        if (t > th) out.push_back(xi + a1 * (t - th));
      }
    } else if (t > t_hit) {
      right.edges(t, out);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

}  // namespace

ExactSolution exact_two_flux_riemann(const PiecewiseFlux& pf, double uL, double uR,
                                     double jump_pos) {
  if (pf.interface_count() != 1)
    throw UnsupportedOracleError("two-flux Riemann oracle needs exactly one interface");
  const double xi = pf.interfaces().front();
  if (!(jump_pos < xi)) throw UnsupportedOracleError("jump must lie left of the interface");

  auto sol = std::make_shared<TwoFluxRiemann>(
      TwoFluxRiemann{.left_seg = pf.segment(0), .right_seg = pf.segment(1), .xi = xi,
                     .x0 = jump_pos, .uL = uL, .uR = uR, .left = {}, .right = {}});
  TwoFluxRiemann& s = *sol;
  s.uL1 = s.transmit(uL);
  s.uR1 = s.transmit(uR);
  s.left = make_wave(s.left_seg, uL, uR, jump_pos, 0.0);

  ExactSolution out;
  out.validity = {0.0, kInf};
  const double distance = xi - jump_pos;
  if (s.left.type == Wave::Type::jump) {
    s.t_hit = distance / s.left.speed;
    s.right = make_wave(s.right_seg, s.uL1, s.uR1, xi, s.t_hit);
  } else if (s.left.type == Wave::Type::fan) {
    s.t_head = distance / s.left.s_hi;
    s.t_tail = distance / s.left.s_lo;
    const Shape shape = classify(s.right_seg, std::min(s.uL1, s.uR1), std::max(s.uL1, s.uR1));
    if (shape == Shape::linear) {
      s.fan_transport = true;
    } else {
      out.validity.hi = s.t_head;
    }
  }
  out.evaluator = [sol](double x, double t) { return sol->value(x, t); };
  out.breakpoints = [sol](double t) { return sol->breakpoints(t); };
  return out;
}

ExactSolution exact_linear_advection(double speed, InitialDatum u0) {
  auto datum = std::make_shared<const InitialDatum>(std::move(u0));
  ExactSolution out;
  out.validity = {0.0, kInf};
  out.evaluator = [datum, speed](double x, double t) { return evaluate(*datum, x - speed * t); };
  out.breakpoints = [datum, speed](double t) {
    std::vector<double> b;
    if (const auto* pc = std::get_if<PiecewiseConstantDatum>(datum.get())) {
      for (double x : pc->breakpoints) b.push_back(x + speed * t);
    } else if (const auto* table = std::get_if<TableDatum>(datum.get())) {
      for (double x : table->x) b.push_back(x + speed * t);
    }
    return b;
  };
  return out;
}

}  // namespace dflux
