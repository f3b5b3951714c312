#include "dflux/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dflux/errors.hpp"
#include "dflux/quadrature.hpp"

namespace dflux {

namespace {

constexpr double kCflSlack = 1e-12;

// Interior points of (lo, hi) where seg' changes sign.
std::vector<double> critical_points(const FluxSegment& seg, double lo, double hi) {
  std::vector<double> out;
  if (!(lo < hi) || seg.is_linear()) return out;
  if (seg.kind() == SegmentKind::quadratic) {
    const double c = -seg.b() / seg.a();
    if (c > lo && c < hi) out.push_back(c);
    return out;
  }
  constexpr int kProbes = 32;
  double a = lo;
  double da = seg.deriv(a);
  for (int k = 1; k <= kProbes; ++k) {
    const double b = k == kProbes ? hi : lo + (hi - lo) * (static_cast<double>(k) / kProbes);
    const double db = seg.deriv(b);
    if ((da < 0.0) != (db < 0.0)) {
      double l = a;
      double r = b;
      for (int it = 0; it < 100 && r - l > 0.0; ++it) {
        const double m = 0.5 * (l + r);
        if ((seg.deriv(m) < 0.0) == (da < 0.0)) {
          l = m;
        } else {
          r = m;
        }
      }
      const double c = 0.5 * (l + r);
      if (c > lo && c < hi) out.push_back(c);
    }
    a = b;
    da = db;
  }
  return out;
}

double godunov_flux(const FluxSegment& seg, double ul, double ur) {
  const double lo = std::min(ul, ur);
  const double hi = std::max(ul, ur);
  const bool take_min = ul <= ur;
  double best = seg.eval(ul);
  auto consider = [&](double v) { best = take_min ? std::min(best, v) : std::max(best, v); };
  consider(seg.eval(ur));
  for (double c : critical_points(seg, lo, hi)) consider(seg.eval(c));
  return best;
}

// F(u, v) = f(u) + int_u^v min(f', 0) ds, integrated over the monotone pieces.
double engquist_osher_flux(const FluxSegment& seg, double ul, double ur) {
  const double lo = std::min(ul, ur);
  const double hi = std::max(ul, ur);
  std::vector<double> knots{lo};
  for (double c : critical_points(seg, lo, hi)) knots.push_back(c);
  knots.push_back(hi);
  double decreasing = 0.0;
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double p = knots[k - 1];
    const double q = knots[k];
    if (q > p && seg.deriv(0.5 * (p + q)) < 0.0) decreasing += seg.eval(q) - seg.eval(p);
  }
  return seg.eval(ul) + (ur >= ul ? decreasing : -decreasing);
}

double trace_slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

std::pair<double, double> trace_domain(const InflowTrace& a) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (const auto* table = std::get_if<TableTrace>(&a)) {
    if (table->t.size() < 2 || table->t.size() != table->a.size())
      throw DomainError("table trace needs at least two (t, a) samples of equal length");
    return {table->t.front(), table->t.back()};
  }
  if (const auto* c = std::get_if<CallableTrace>(&a)) return {c->t_min, c->t_max};
  return {-inf, inf};
}

void check_trace_interval(const InflowTrace& a, double t0, double t1) {
  const auto [lo, hi] = trace_domain(a);
  if (t0 < lo - trace_slack(lo) || t1 > hi + trace_slack(hi) || t1 < t0) {
    std::ostringstream msg;
    msg << "inflow trace is undefined on (" << t0 << ", " << t1 << "); domain is [" << lo << ", "
        << hi << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double numerical_flux_value(NumericalFlux kind, const FluxSegment& seg, double u_left,
                            double u_right) {
  switch (kind) {
    case NumericalFlux::upwind:
      return seg.eval(u_left);
    case NumericalFlux::godunov:
      return godunov_flux(seg, u_left, u_right);
    case NumericalFlux::engquist_osher:
      return engquist_osher_flux(seg, u_left, u_right);
  }
  return seg.eval(u_left);
}

double trace_value(const InflowTrace& a, double t) {
  if (const auto* c = std::get_if<ConstantTrace>(&a)) return c->value;
  if (const auto* l = std::get_if<LinearTrace>(&a)) return l->value + l->slope * t;
  if (const auto* table = std::get_if<TableTrace>(&a)) {
    const auto it = std::upper_bound(table->t.begin(), table->t.end(), t);
    if (it == table->t.begin()) return table->a.front();
    if (it == table->t.end()) return table->a.back();
    const auto k = static_cast<std::size_t>(it - table->t.begin());
    const double w = (t - table->t[k - 1]) / (table->t[k] - table->t[k - 1]);
    return (1.0 - w) * table->a[k - 1] + w * table->a[k];
  }
  return std::get<CallableTrace>(a).fn(t);
}

double trace_average(const InflowTrace& a, double t0, double t1) {
  check_trace_interval(a, t0, t1);
  if (t1 == t0) return trace_value(a, t0);
  if (const auto* c = std::get_if<ConstantTrace>(&a)) return c->value;
  if (const auto* l = std::get_if<LinearTrace>(&a)) return l->value + l->slope * 0.5 * (t0 + t1);
  auto f = [&a](double t) { return trace_value(a, t); };
  if (const auto* table = std::get_if<TableTrace>(&a))
    return gauss5().integrate_pieces(f, t0, t1, table->t) / (t1 - t0);
  return gauss5().integrate(f, t0, t1) / (t1 - t0);
}

double inflow_boundary_value(const InflowTrace& a, std::size_t step_index, double dt) {
  const double t0 = static_cast<double>(step_index) * dt;
  return trace_average(a, t0, t0 + dt);
}

Interval trace_range(const InflowTrace& a, double t0, double t1) {
  check_trace_interval(a, t0, t1);
  Interval r{trace_value(a, t0), trace_value(a, t0)};
  r = r.hull(trace_value(a, t1));
  if (const auto* table = std::get_if<TableTrace>(&a)) {
    for (std::size_t k = 0; k < table->t.size(); ++k) {
      if (table->t[k] > t0 && table->t[k] < t1) r = r.hull(table->a[k]);
    }
  } else if (std::holds_alternative<CallableTrace>(a)) {
    for (int k = 1; k < 4096; ++k) r = r.hull(trace_value(a, t0 + (t1 - t0) * k / 4096.0));
  }
  return r;
}

SolverConfig SolverConfig::from(const ProblemSpec& problem, NumericalFlux flux) {
  SolverConfig cfg;
  cfg.lambda = problem.lambda;
  cfg.t_end = problem.t_end;
  cfg.numerical_flux = flux;
  cfg.boundary_left = problem.boundary_left;
  return cfg;
}

Interval data_range(std::span<const double> u, const LeftBoundary& boundary, double t_end) {
  if (u.empty()) throw ValidationError("empty state");
  const auto [mn, mx] = std::minmax_element(u.begin(), u.end());
  Interval r{*mn, *mx};
  if (const auto* inflow = std::get_if<InflowBoundary>(&boundary))
    r = r.hull(trace_range(inflow->trace, 0.0, t_end));
  return r;
}

Stepper::Stepper(const Grid& grid, const PiecewiseFlux& pf, const SolverConfig& cfg,
                 Interval data_range)
    : grid_(grid), pf_(pf), cfg_(cfg) {
  if (pf.interface_count() != grid.interface_cells().size())
    throw ValidationError("grid and flux disagree on the number of interfaces");
  if (!(cfg.lambda > 0.0)) throw ValidationError("lambda must be positive");
  ranges_ = subdomain_ranges(pf, data_range);
  invariant_ = invariant_interval(pf, data_range);
  pf_ = pf.validated_on(invariant_);
  cfl_product_ = cfg.lambda * max_wave_speed(pf_, invariant_);
  if (cfl_product_ > 1.0 + kCflSlack) {
    std::ostringstream msg;
    msg << "CFL condition violated: lambda * max f' = " << cfg.lambda << " * "
        << cfl_product_ / cfg.lambda << " = " << cfl_product_ << " > 1 on the invariant interval ["
        << invariant_.lo << ", " << invariant_.hi << "]";
    throw CflError(msg.str());
  }
}

double Stepper::boundary_value(double t_level, double dt_next) const {
  const auto& trace = std::get<InflowBoundary>(cfg_.boundary_left).trace;
  if (dt_next <= 0.0) return trace_value(trace, t_level);
  return trace_average(trace, t_level, t_level + dt_next);
}

State Stepper::advance(const State& s, double dt) const {
  if (s.u.size() != grid_.n()) throw ValidationError("state size does not match the grid");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const double lam = dt / grid_.dx();
  double speed = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    const double v = s.u[j];
    const double slack = 1e-12 * std::max({1.0, std::abs(invariant_.lo), std::abs(invariant_.hi)});
    if (!invariant_.contains(v, slack)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "state value u[" << j << "] = " << v << " left the invariant interval ["
          << invariant_.lo << ", " << invariant_.hi << "]";
      throw RangeError(msg.str());
    }
    speed = std::max(speed, pf_.segment(grid_.subdomain_of_cell()[j]).deriv(v));
  }
  if (lam * speed > 1.0 + kCflSlack) {
    std::ostringstream msg;
    msg << "CFL condition violated at step " << s.step << ": " << lam << " * " << speed << " > 1";
    throw StabilityError(msg.str());
  }
  return advance_unchecked(s, dt);
}

State Stepper::advance_unchecked(const State& s, double dt) const {
  const auto& u = s.u;
  const double lam = dt / grid_.dx();
  const NumericalFlux kind = cfg_.numerical_flux;
  State out;
  out.u.resize(u.size());
  out.t = s.t + dt;
  out.step = s.step + 1;

  for (std::size_t i = 0; i < grid_.subdomain_count(); ++i) {
    const std::size_t b = grid_.subdomain_begin(i);
    const std::size_t e = grid_.subdomain_end(i);
    const FluxSegment& seg = pf_.segment(i);
    auto right_of = [&](std::size_t j) { return j + 1 < e ? u[j + 1] : u[j]; };

    double left_face = numerical_flux_value(kind, seg, u[b], right_of(b));
    if (i > 0) {
      // D_{i-1} is already at the new level.
      out.u[b] = interface_map(pf_, i, out.u[b - 1], invariant_);
    } else if (std::holds_alternative<InflowBoundary>(cfg_.boundary_left)) {
      out.u[b] = boundary_value(out.t, std::min(nominal_dt(), cfg_.t_end - out.t));
    } else {
      out.u[b] = u[b] - lam * (left_face - numerical_flux_value(kind, seg, u[b], u[b]));
    }
    if (seg.kind() == SegmentKind::linear) {
      // Every supported two-point flux reduces to a*u_left + b here. The
      // convex-combination form is exact at nu = 1.
      const double nu = lam * seg.a();
      for (std::size_t j = b + 1; j < e; ++j) out.u[j] = (1.0 - nu) * u[j] + nu * u[j - 1];
      continue;
    }
    for (std::size_t j = b + 1; j < e; ++j) {
      const double right_face = numerical_flux_value(kind, seg, u[j], right_of(j));
      out.u[j] = u[j] - lam * (right_face - left_face);
      left_face = right_face;
    }
  }
  return out;
}

State step(const State& state, const Grid& grid, const PiecewiseFlux& pf, const SolverConfig& cfg) {
  const Stepper stepper(grid, pf, cfg, data_range(state.u, cfg.boundary_left, cfg.t_end));
  return stepper.advance(state);
}

Trajectory run(const ProblemSpec& problem, const Grid& grid, const PiecewiseFlux& pf,
               const SolverConfig& cfg, std::span<const double> snapshot_times,
               RunOptions options) {
  const double tol = 1e-12 * std::max(1.0, std::abs(problem.xmax - problem.xmin));
  if (std::abs(grid.xmin() - problem.xmin) > tol || std::abs(grid.xmax() - problem.xmax) > tol)
    throw ValidationError("grid domain does not match the problem domain");
  State initial{cell_average(problem.initial, grid), 0.0, 0};
  return run_from(std::move(initial), grid, pf, cfg, snapshot_times, options);
}

Trajectory run_from(State initial, const Grid& grid, const PiecewiseFlux& pf,
                    const SolverConfig& cfg, std::span<const double> snapshot_times,
                    RunOptions options) {
  const double t_end = cfg.t_end;
  if (!(t_end >= 0.0)) throw ValidationError("t_end must be non-negative");
  std::vector<double> times(snapshot_times.begin(), snapshot_times.end());
  std::sort(times.begin(), times.end());
  for (double t : times) {
    if (t < -1e-12 || t > t_end + 1e-12 * std::max(1.0, t_end)) {
      std::ostringstream msg;
      msg << "snapshot time " << t << " outside [0, " << t_end << "]";
      throw DomainError(msg.str());
    }
  }

  const Stepper stepper(grid, pf, cfg, data_range(initial.u, cfg.boundary_left, t_end));
  const double dt = stepper.nominal_dt();
  const double ratio = t_end / dt;
  auto full_steps = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  const double remainder = t_end - static_cast<double>(full_steps) * dt;
  const bool partial = remainder > 1e-12 * std::max(1.0, t_end);
  const std::size_t total_steps = full_steps + (partial ? 1 : 0);

  Trajectory traj;
  if (options.accumulate_increments) traj.temporal_increments.emplace(grid.n(), 0.0);
  std::size_t next_snapshot = 0;
  auto record = [&](const State& s) {
    while (next_snapshot < times.size() &&
           times[next_snapshot] <= s.t + 1e-12 * std::max(1.0, s.t)) {
      traj.snapshots.push_back({times[next_snapshot], s});
      ++next_snapshot;
    }
  };

  State current = std::move(initial);
  current.t = 0.0;
  current.step = 0;
  record(current);
  if (options.retain_levels) traj.levels.push_back(current);

  for (std::size_t k = 0; k < total_steps; ++k) {
    const bool last = k + 1 == total_steps;
    const double h = k < full_steps ? dt : remainder;
    State next = stepper.advance(current, h);
    next.t = last ? t_end : static_cast<double>(k + 1) * dt;
    if (traj.temporal_increments) {
      auto& acc = *traj.temporal_increments;
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += std::abs(next.u[j] - current.u[j]);
    }
    if (options.retain_levels) {
      traj.step_dt.push_back(h);
      traj.levels.push_back(next);
    }
    current = std::move(next);
    record(current);
  }
  traj.final_state = std::move(current);
  return traj;
}

}  // namespace dflux
