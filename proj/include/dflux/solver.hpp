#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dflux/flux_model.hpp"
#include "dflux/grid.hpp"

namespace dflux {

enum class NumericalFlux { upwind, godunov, engquist_osher };

// Two-point flux F(u_left, u_right) at a face of one subdomain.
double numerical_flux_value(NumericalFlux kind, const FluxSegment& seg, double u_left,
                            double u_right);

// Inflow traces a(t) for the left boundary.
struct ConstantTrace {
  double value = 0.0;
};

// a(t) = value + slope * t.
struct LinearTrace {
  double value = 0.0;
  double slope = 0.0;
};

// Piecewise linear through (t, a) samples; defined on [t.front(), t.back()].
struct TableTrace {
  std::vector<double> t;
  std::vector<double> a;
};

struct CallableTrace {
  std::function<double(double)> fn;
  double t_min = 0.0;
  double t_max = 0.0;
};

using InflowTrace = std::variant<ConstantTrace, LinearTrace, TableTrace, CallableTrace>;

double trace_value(const InflowTrace& a, double t);

// Average of a over (t0, t1); the point value when t0 == t1. Throws
// DomainError outside the trace's domain.
double trace_average(const InflowTrace& a, double t0, double t1);

// Average of a over (step_index * dt, (step_index + 1) * dt).
double inflow_boundary_value(const InflowTrace& a, std::size_t step_index, double dt);

// Range of a over [t0, t1].
Interval trace_range(const InflowTrace& a, double t0, double t1);

// Zero-order extrapolation: ghost neighbor equals the boundary cell.
struct OutflowBoundary {};

// Appendix-style boundary cell fed by the time average of a(t).
struct InflowBoundary {
  InflowTrace trace;
};

using LeftBoundary = std::variant<OutflowBoundary, InflowBoundary>;

struct ProblemSpec {
  InitialDatum initial;
  LeftBoundary boundary_left = OutflowBoundary{};
  double xmin = -1.0;
  double xmax = 1.0;
  double t_end = 0.0;
  double lambda = 0.0;
};

struct SolverConfig {
  double lambda = 0.0;  // dt / dx
  double t_end = 0.0;
  NumericalFlux numerical_flux = NumericalFlux::upwind;
  LeftBoundary boundary_left = OutflowBoundary{};
  // The right boundary is always outflow: with f' > 0 nothing enters there.

  static SolverConfig from(const ProblemSpec& problem,
                           NumericalFlux flux = NumericalFlux::upwind);
};

struct State {
  std::vector<double> u;
  double t = 0.0;
  std::size_t step = 0;
};

struct Snapshot {
  double requested = 0.0;
  State state;
};

struct RunOptions {
  bool accumulate_increments = false;  // sum_n |u_j^{n+1} - u_j^n| per cell
  bool retain_levels = false;           // every time level, for diagnostics
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  State final_state;
  std::optional<std::vector<double>> temporal_increments;
  std::vector<State> levels;     // levels[k] at t^k, only with retain_levels
  std::vector<double> step_dt;   // dt of level k -> k+1, only with retain_levels
};

/// Advances cell averages by the upwind-type scheme with ghost-cell
/// Rankine-Hugoniot coupling:
///
///   interior of D_i:  u_j <- u_j - lambda (F(u_j, u_{j+1}) - F(u_{j-1}, u_j))
///   ghost cell P_i:   u_{P_i} <- (f^(i))^{-1}(f^(i-1)(u_{P_i - 1}))  (new level)
///
/// Construction fixes the invariant interval for the given data range,
/// validates monotonicity on it and checks the CFL product. Each step
/// re-checks CFL against the realized state.
class Stepper {
 public:
  Stepper(const Grid& grid, const PiecewiseFlux& pf, const SolverConfig& cfg, Interval data_range);

  const Interval& invariant() const { return invariant_; }
  const std::vector<Interval>& ranges() const { return ranges_; }
  const PiecewiseFlux& flux() const { return pf_; }
  const Grid& grid() const { return grid_; }
  double nominal_dt() const { return cfg_.lambda * grid_.dx(); }
  double cfl_product() const { return cfl_product_; }

  // One step of size nominal_dt(), or a shorter dt.
  State advance(const State& s) const { return advance(s, nominal_dt()); }
  State advance(const State& s, double dt) const;

  // Same update without the CFL and range checks. For negative controls.
  State advance_unchecked(const State& s, double dt) const;

 private:
  double boundary_value(double t_level, double dt_next) const;

  const Grid& grid_;
  PiecewiseFlux pf_;
  SolverConfig cfg_;
  Interval invariant_;
  std::vector<Interval> ranges_;
  double cfl_product_ = 0.0;
};

// Hull of the cell values, plus the inflow trace range on [0, t_end].
Interval data_range(std::span<const double> u, const LeftBoundary& boundary, double t_end);

// One step from `state` with dt = lambda * dx.
State step(const State& state, const Grid& grid, const PiecewiseFlux& pf, const SolverConfig& cfg);

// Initial state from the cell averages of the problem's datum, stepped to
// cfg.t_end. The last step is shortened to land on t_end. Snapshot k is the
// first level with t >= snapshot_times[k].
Trajectory run(const ProblemSpec& problem, const Grid& grid, const PiecewiseFlux& pf,
               const SolverConfig& cfg, std::span<const double> snapshot_times,
               RunOptions options = {});

// Same, from an explicit initial state.
Trajectory run_from(State initial, const Grid& grid, const PiecewiseFlux& pf,
                    const SolverConfig& cfg, std::span<const double> snapshot_times,
                    RunOptions options = {});

}  // namespace dflux
