// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dflux/analysis.hpp"
#include "dflux/commands.hpp"
#include "dflux/config.hpp"
#include "dflux/oracle.hpp"
#include "dflux/solver.hpp"

using namespace dflux;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.ok) ++failures;
  std::printf("%s  %2d %-24s %s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fix2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

Grid preset_grid(const ExperimentConfig& c, std::size_t n) {
  return build_grid(c.xmin, c.xmax, c.interfaces, n);
}

std::vector<Resolution> as_resolutions(const ErrorReport& r) {
  std::vector<Resolution> out;
  for (const auto& row : r.rows) out.push_back({row.n, row.l1_error});
  return out;
}

struct Table {
  std::vector<double> errors;
  std::vector<double> rates;
};

Outcome compare_table(const ErrorReport& r, const Table& target) {
  Outcome o;
  std::ostringstream d;
  if (r.rows.size() != target.errors.size()) return {false, "row count mismatch"};
  d << "err";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const double rel = r.rows[k].l1_error / target.errors[k] - 1.0;
    const bool within = std::abs(rel) <= 0.10;
    o.ok = o.ok && within;
    d << ' ' << r.rows[k].n << ':' << sci(r.rows[k].l1_error) << (within ? "" : "*");
  }
  d << " | ooc";
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    const double q = *r.rows[k].ooc;
    const bool within = std::abs(q - target.rates[k - 1]) <= 0.1 + 1e-12;
    o.ok = o.ok && within;
    d << ' ' << fix2(q) << (within ? "" : "*");
  }
  o.detail = d.str();
  return o;
}

Outcome rate_floor(const ErrorReport& r) {
  const auto res = as_resolutions(r);
  const double slope = fitted_order(res);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < r.rows.size(); ++k) lowest = std::min(lowest, *r.rows[k].ooc);
  return {lowest >= 0.45 && slope >= 0.5 && slope <= 1.35,
          "min ooc " + fix2(lowest) + ", fitted slope " + fix2(slope)};
}

Trajectory levels_of(const Experiment& e, const Grid& g, NumericalFlux kind) {
  SolverConfig cfg = e.solver;
  cfg.numerical_flux = kind;
  return run(e.problem, g, e.flux, cfg, {}, {.retain_levels = true});
}

}  // namespace

int main() {
  const auto c1 = preset("experiment1");
  const auto c2 = preset("experiment2");
  const auto e1 = build_experiment(c1);
  const auto e2 = build_experiment(c2);

  const ErrorReport r1 = convergence_study(c1);
  const ErrorReport r2 = convergence_study(c2);

  report(1, "table_experiment1", [&] {
    return compare_table(r1, {{1.751e-1, 1.256e-1, 8.865e-2, 5.918e-2, 3.637e-2, 1.978e-2, 8.145e-3},
                              {0.48, 0.50, 0.58, 0.70, 0.88, 1.28}});
  });
  report(2, "table_experiment2", [&] {
    return compare_table(r2, {{2.771e-1, 1.823e-1, 1.261e-1, 8.390e-2, 5.125e-2, 2.780e-2, 1.132e-2},
                              {0.60, 0.53, 0.59, 0.71, 0.88, 1.30}});
  });
  report(3, "rate_floor", [&] {
    const Outcome a = rate_floor(r1);
    const Outcome b = rate_floor(r2);
    return Outcome{a.ok && b.ok, "experiment1: " + a.detail + "; experiment2: " + b.detail};
  });

  report(4, "oracle_order", [&] {
    const auto exact = exact_two_flux_riemann(e1.flux, 0.5, 2.0, -0.5);
    ProblemSpec p = e1.problem;
    p.t_end = 0.3;
    SolverConfig cfg = e1.solver;
    cfg.t_end = 0.3;
    std::vector<Resolution> errs;
    for (std::size_t n : {64u, 128u, 256u, 512u, 1024u}) {
      const Grid g = preset_grid(c1, n);
      const auto traj = run(p, g, e1.flux, cfg, {});
      errs.push_back({n, l1_error_vs_oracle(traj.final_state, g, exact, 0.3)});
    }
    const double slope = fitted_order(errs);
    std::ostringstream d;
    d << "fitted order " << fix2(slope) << ", pairwise";
    for (double q : ooc(errs)) d << ' ' << fix2(q);
    return Outcome{slope >= 0.4 && slope <= 0.6, d.str()};
  });

  report(5, "steady_state", [&] {
    double per_step = 0.0;
    double total = 0.0;
    for (std::size_t n : {64u, 1024u}) {
      const Grid g = preset_grid(c1, n);
      State s{std::vector<double>(n, 2.0), 0.0, 0};
      const auto traj = run_from(s, g, e1.flux, e1.solver, {}, {.retain_levels = true});
      for (std::size_t k = 1; k < traj.levels.size(); ++k)
        per_step = std::max(per_step, max_diff(traj.levels[k].u, traj.levels[k - 1].u));
      total = std::max(total, max_diff(traj.final_state.u, s.u));
    }
    return Outcome{per_step <= 1e-13 && total <= 1e-11,
                   "u = 2, n = 64 and 1024: max step change " + sci(per_step) + ", drift " +
                       sci(total)};
  });

  report(6, "entropy_inequality", [&] {
    Outcome o;
    std::ostringstream d;
    for (const Experiment* e : {&e1, &e2}) {
      const Grid g = build_grid(e->problem.xmin, e->problem.xmax, e->flux.interfaces(), 64);
      const auto traj = run(e->problem, g, e->flux, e->solver, {}, {.retain_levels = true});
      const auto u0 = cell_average(e->problem.initial, g);
      const Stepper st(g, e->flux, e->solver, data_range(u0, e->solver.boundary_left, e->solver.t_end));
      const auto rep = entropy_residual(traj, g, e->flux, entropy_constants(st.invariant(), 17));
      o.ok = o.ok && rep.max_residual <= 1e-12;
      d << (e == &e1 ? "experiment1 " : ", experiment2 ") << sci(rep.max_residual);
    }
    o.detail = "max residual " + d.str();
    return o;
  });

  report(7, "temporal_tv", [&] {
    auto ratio = [&](std::size_t n) {
      const Grid g = preset_grid(c1, n);
      const auto traj = run(e1.problem, g, e1.flux, e1.solver, {}, {.accumulate_increments = true});
      return max_temporal_tv(traj) / spatial_tv(cell_average(e1.problem.initial, g));
    };
    const double lo = ratio(128);
    const double hi = ratio(1024);
    const double growth = hi / lo - 1.0;
    return Outcome{growth < 0.05, "ratio n=128 " + fix2(lo) + ", n=1024 " + fix2(hi) +
                                      ", growth " + fix2(100.0 * growth) + "%"};
  });

  report(8, "scheme_equivalence", [&] {
    double worst = 0.0;
    for (const Experiment* e : {&e1, &e2})
      for (std::size_t n : {64u, 256u}) {
        const Grid g = build_grid(e->problem.xmin, e->problem.xmax, e->flux.interfaces(), n);
        const auto up = levels_of(*e, g, NumericalFlux::upwind);
        for (NumericalFlux k : {NumericalFlux::godunov, NumericalFlux::engquist_osher}) {
          const auto other = levels_of(*e, g, k);
          for (std::size_t l = 0; l < up.levels.size(); ++l)
            worst = std::max(worst, max_diff(up.levels[l].u, other.levels[l].u));
        }
      }
    return Outcome{worst <= 1e-14, "max per-level difference " + sci(worst)};
  });

  report(9, "monotonicity", [&] {
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = 64;
    const Grid g = preset_grid(c1, n);
    const Interval range{0.5, 2.0};
    const Stepper st(g, e1.flux, e1.solver, range);
    std::size_t violations = 0;
    for (int pair = 0; pair < 100; ++pair) {
      State a;
      State b;
      for (std::size_t j = 0; j < n; ++j) {
        const double lo = range.lo + range.width() * unit(rng);
        a.u.push_back(lo);
        b.u.push_back(lo + (range.hi - lo) * unit(rng));
      }
      for (int k = 0; k < 200; ++k) {
        a = st.advance(a);
        b = st.advance(b);
      }
      for (std::size_t j = 0; j < n; ++j) violations += a.u[j] > b.u[j] + 1e-13 ? 1 : 0;
    }
    return Outcome{violations == 0,
                   "100 pairs, 200 steps, " + std::to_string(violations) + " violations"};
  });

  report(10, "exact_shift", [&] {
    const std::size_t n = 128;
    const std::size_t m = 40;
    const Grid g = build_grid(0.0, 1.0, {}, n);
    const PiecewiseFlux pf(FluxSegment::linear(1.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    State s;
    for (std::size_t j = 0; j < n; ++j) s.u.push_back(1.0 + unit(rng));
    SolverConfig cfg;
    cfg.lambda = 1.0;
    cfg.t_end = static_cast<double>(m) * g.dx();
    const auto traj = run_from(s, g, pf, cfg, {});
    if (traj.final_state.step != m) return Outcome{false, "took " + std::to_string(traj.final_state.step) + " steps"};
    std::size_t mismatched = 0;
    double l1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double want = s.u[j >= m ? j - m : 0];
      const double got = traj.final_state.u[j];
      if (std::memcmp(&want, &got, sizeof(double)) != 0) ++mismatched;
      l1 += std::abs(got - want) * g.dx();
    }
    return Outcome{mismatched == 0 && l1 == 0.0,
                   "random datum, n = " + std::to_string(n) + ", " + std::to_string(m) + " steps: " +
                       std::to_string(mismatched) + " cells differ, L1 " + sci(l1)};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
