#include "dflux/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "dflux/errors.hpp"

namespace dflux {

namespace fs = std::filesystem;

namespace {

bool aligned(const ExperimentConfig& c, std::size_t n) {
  try {
    (void)build_grid(c.xmin, c.xmax, c.interfaces, n);
    return true;
  } catch (const AlignmentError&) {
    return false;
  }
}

std::size_t pick_diagnostic_n(const ExperimentConfig& c) {
  std::vector<std::size_t> candidates = c.resolutions;
  if (aligned(c, 64)) candidates.push_back(64);
  std::size_t best = 0;
  for (std::size_t n : candidates) {
    if (n > 256) continue;
    const auto dist = [](std::size_t m) { return m > 64 ? m - 64 : 64 - m; };
    if (best == 0 || dist(n) < dist(best)) best = n;
  }
  return best == 0 ? *std::min_element(c.resolutions.begin(), c.resolutions.end()) : best;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot write " + path.string());
  return out;
}

State final_state(const Experiment& e, const Grid& grid) {
  const double t_end[] = {e.solver.t_end};
  return run(e.problem, grid, e.flux, e.solver, t_end).final_state;
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

std::string fmt_sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

CheckResult skipped(std::string name, std::string why) {
  return {std::move(name), CheckStatus::skipped, std::move(why)};
}

CheckResult steady_state_check(const Experiment& e, const Grid& grid, const State& initial) {
  if (e.flux.interface_count() == 0) return skipped("steady_state", "no flux interfaces");
  const auto c = adapted_constants(e.flux, initial.u.front());
  State s;
  s.u.resize(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) s.u[j] = c[grid.subdomain_of_cell()[j]];
  SolverConfig cfg = e.solver;
  cfg.boundary_left = OutflowBoundary{};
  const auto traj = run_from(s, grid, e.flux, cfg, {}, {.retain_levels = true});
  double per_step = 0.0;
  for (std::size_t k = 1; k < traj.levels.size(); ++k)
    per_step = std::max(per_step, max_abs_difference(traj.levels[k].u, traj.levels[k - 1].u));
  const double total = max_abs_difference(traj.final_state.u, s.u);
  return check("steady_state", per_step <= 1e-13 && total <= 1e-11,
               "max step change " + fmt_sci(per_step) + ", drift over run " + fmt_sci(total));
}

CheckResult interface_rh_check(const Experiment& e, const Grid& grid, const Trajectory& traj) {
  if (e.flux.interface_count() == 0) return skipped("interface_rh", "no flux interfaces");
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.levels.size(); ++k) {
    const auto& u = traj.levels[k].u;
    for (std::size_t i = 1; i < grid.subdomain_count(); ++i) {
      const std::size_t p = grid.subdomain_begin(i);
      const double left = e.flux.segment(i - 1).eval(u[p - 1]);
      const double right = e.flux.segment(i).eval(u[p]);
      worst = std::max(worst, std::abs(left - right) / std::max(1.0, std::abs(left)));
    }
  }
  return check("interface_rh", worst <= 1e-12, "max relative flux jump " + fmt_sci(worst));
}

CheckResult monotonicity_check(const Experiment& e, const Grid& grid, const Interval& range) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  constexpr int kPairs = 20;
  constexpr int kSteps = 200;
  for (int pair = 0; pair < kPairs; ++pair) {
    State a;
    State b;
    for (std::size_t j = 0; j < grid.n(); ++j) {
      const double lo = range.lo + range.width() * unit(rng);
      a.u.push_back(lo);
      b.u.push_back(lo + (range.hi - lo) * unit(rng));
    }
    const Stepper stepper(grid, e.flux, e.solver, range);
    for (int k = 0; k < kSteps; ++k) {
      a = stepper.advance(a);
      b = stepper.advance(b);
    }
    for (std::size_t j = 0; j < grid.n(); ++j) violations += a.u[j] > b.u[j] + 1e-13 ? 1 : 0;
  }
  return check("monotonicity", violations == 0,
               std::to_string(kPairs) + " ordered pairs, " + std::to_string(kSteps) +
                   " steps, " + std::to_string(violations) + " violations");
}

CheckResult tvd_check(const Grid& grid, const Trajectory& traj) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.levels.size(); ++k) {
    for (std::size_t i = 0; i < grid.subdomain_count(); ++i) {
      const std::size_t b = grid.subdomain_begin(i);
      const double incoming = std::abs(traj.levels[k].u[b] - traj.levels[k - 1].u[b]);
      const double growth = spatial_tv(traj.levels[k], grid, i) -
                            spatial_tv(traj.levels[k - 1], grid, i) - incoming;
      worst = std::max(worst, growth);
    }
  }
  return check("tvd", worst <= 1e-12,
               "max per-subdomain TV growth beyond boundary feed " + fmt_sci(worst));
}

CheckResult entropy_check(const Experiment& e, const Grid& grid, const Trajectory& traj,
                          const Interval& invariant) {
  const auto c = entropy_constants(invariant, 17);
  const auto report = entropy_residual(traj, grid, e.flux, c);
  return check("entropy", report.max_residual <= 1e-12,
               "max residual " + fmt_sci(report.max_residual) + " over 17 constants (cell " +
                   std::to_string(report.cell) + ", step " + std::to_string(report.step) + ")");
}

CheckResult temporal_tv_check(const ExperimentConfig& c, const Experiment& e) {
  std::size_t lo = 128;
  std::size_t hi = 1024;
  if (!aligned(c, lo) || !aligned(c, hi)) {
    lo = *std::min_element(c.resolutions.begin(), c.resolutions.end());
    hi = *std::max_element(c.resolutions.begin(), c.resolutions.end());
  }
  if (lo == hi) return skipped("temporal_tv", "needs two resolutions");
  auto ratio = [&](std::size_t n) {
    const Grid grid = build_grid(c.xmin, c.xmax, c.interfaces, n);
    const auto traj = run(e.problem, grid, e.flux, e.solver, {}, {.accumulate_increments = true});
    const double tv0 = spatial_tv(cell_average(e.problem.initial, grid));
    return tv0 > 0.0 ? max_temporal_tv(traj) / tv0 : -1.0;
  };
  const double r_lo = ratio(lo);
  if (r_lo < 0.0) return skipped("temporal_tv", "initial datum has zero variation");
  const double r_hi = ratio(hi);
  const double growth = r_hi / r_lo - 1.0;
  std::ostringstream d;
  d << "max_j sum_n |du| / TV(u0): n=" << lo << " " << r_lo << ", n=" << hi << " " << r_hi
    << ", growth " << std::fixed << std::setprecision(2) << 100.0 * growth << "%";
  return check("temporal_tv", growth < 0.05, d.str());
}

CheckResult scheme_equivalence_check(const Experiment& e, const Grid& grid,
                                     const Trajectory& upwind) {
  double worst = 0.0;
  for (NumericalFlux kind : {NumericalFlux::godunov, NumericalFlux::engquist_osher}) {
    SolverConfig cfg = e.solver;
    cfg.numerical_flux = kind;
    const auto other = run(e.problem, grid, e.flux, cfg, {}, {.retain_levels = true});
    for (std::size_t k = 0; k < upwind.levels.size(); ++k)
      worst = std::max(worst, max_abs_difference(upwind.levels[k].u, other.levels[k].u));
  }
  return check("scheme_equivalence", worst <= 1e-14,
               "max difference upwind vs Godunov / Engquist-Osher " + fmt_sci(worst));
}

void print(std::ostream& log, const CheckResult& r) {
  const char* tag = r.status == CheckStatus::pass ? "PASS" : r.status == CheckStatus::fail ? "FAIL" : "SKIP";
  log << tag << "  " << std::left << std::setw(20) << r.name << r.detail;
  if (r.status == CheckStatus::skipped) log << " (skipped)";
  log << '\n';
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<fs::path> cmd_run(const ExperimentConfig& config, std::size_t n, const fs::path& out_dir) {
  const Experiment e = build_experiment(config);
  const Grid grid = build_grid(config.xmin, config.xmax, config.interfaces, n);
  const auto traj = run(e.problem, grid, e.flux, e.solver, e.snapshots);
  const std::string digest = config_digest(config);

  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& snap = traj.snapshots[k];
    const fs::path csv = out_dir / ("snapshot_" + std::to_string(k) + ".csv");
    {
      auto out = open_output(csv);
      out << "x_center,u\n";
      for (std::size_t j = 0; j < grid.n(); ++j)
        out << format_real(grid.center(j)) << ',' << format_real(snap.state.u[j]) << '\n';
    }
    const fs::path meta = out_dir / ("snapshot_" + std::to_string(k) + ".meta");
    {
      auto out = open_output(meta);
      out << "config_digest=" << digest << '\n'
          << "n=" << n << '\n'
          << "dx=" << format_real(grid.dx()) << '\n'
          << "dt=" << format_real(config.lambda * grid.dx()) << '\n'
          << "steps=" << snap.state.step << '\n'
          << "requested_time=" << format_real(snap.requested) << '\n'
          << "time=" << format_real(snap.state.t) << '\n'
          << "numerical_flux=" << to_string(config.numerical_flux) << '\n';
    }
    written.push_back(csv);
    written.push_back(meta);
  }
  return written;
}

ErrorReport convergence_study(const ExperimentConfig& config) {
  const Experiment e = build_experiment(config);
  std::vector<std::size_t> ns = config.resolutions;
  std::sort(ns.begin(), ns.end());

  auto solve = [&](std::size_t n) {
    const Grid grid = build_grid(config.xmin, config.xmax, config.interfaces, n);
    return std::make_pair(grid, final_state(e, grid));
  };
  auto reference = std::async(std::launch::async, solve, config.reference_n);
  std::vector<std::future<std::pair<Grid, State>>> coarse;
  for (std::size_t n : ns) coarse.push_back(std::async(std::launch::async, solve, n));

  const auto [ref_grid, ref_state] = reference.get();
  std::vector<Resolution> errors;
  for (auto& f : coarse) {
    const auto [grid, state] = f.get();
    errors.push_back({grid.n(), l1_error(state, grid, ref_state, ref_grid)});
  }
  return make_error_report(errors, "numerical n=" + std::to_string(config.reference_n),
                           config_digest(config));
}

void write_convergence_csv(const ErrorReport& report, std::ostream& out) {
  out << "n,l1_error,ooc\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << format_real(row.l1_error) << ',';
    if (row.ooc) out << format_real(*row.ooc);
    out << '\n';
  }
}

ErrorReport cmd_convergence(const ExperimentConfig& config, const fs::path& out_path) {
  ErrorReport report = convergence_study(config);
  auto out = open_output(out_path);
  write_convergence_csv(report, out);
  return report;
}

bool VerifyReport::passed() const {
  if (validation_failed) return false;
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& r) { return r.status == CheckStatus::fail; });
}

VerifyReport cmd_verify(const ExperimentConfig& config, std::ostream& log) {
  VerifyReport report;
  auto add = [&](CheckResult r) {
    print(log, r);
    report.checks.push_back(std::move(r));
  };

  const Experiment e = build_experiment(config);
  const std::size_t n = pick_diagnostic_n(config);
  const Grid grid = build_grid(config.xmin, config.xmax, config.interfaces, n);
  const State initial{cell_average(e.problem.initial, grid), 0.0, 0};
  const Interval range = data_range(initial.u, e.solver.boundary_left, e.solver.t_end);

  Interval invariant;
  try {
    const Stepper stepper(grid, e.flux, e.solver, range);
    invariant = stepper.invariant();
    std::ostringstream d;
    d << "lambda * max f' = " << stepper.cfl_product() << " <= 1 (n=" << n << ")";
    add(check("cfl", true, d.str()));
  } catch (const ValidationError& err) {
    add(check("cfl", false, err.what()));
    report.validation_failed = true;
    return report;
  }

  const auto traj = run(e.problem, grid, e.flux, e.solver, {}, {.retain_levels = true});
  add(steady_state_check(e, grid, initial));
  add(interface_rh_check(e, grid, traj));
  add(monotonicity_check(e, grid, range));
  add(tvd_check(grid, traj));
  add(entropy_check(e, grid, traj, invariant));
  add(temporal_tv_check(config, e));
  add(scheme_equivalence_check(e, grid, traj));
  return report;
}

}  // namespace dflux
