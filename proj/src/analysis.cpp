#include "dflux/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dflux/errors.hpp"
#include "dflux/quadrature.hpp"

namespace dflux {

double l1_error(const State& coarse, const Grid& coarse_grid, const State& fine,
                const Grid& fine_grid) {
  const double scale = std::max(1.0, coarse_grid.xmax() - coarse_grid.xmin());
  if (std::abs(coarse_grid.xmin() - fine_grid.xmin()) > 1e-12 * scale ||
      std::abs(coarse_grid.xmax() - fine_grid.xmax()) > 1e-12 * scale) {
    throw ProjectionError("l1_error: grids cover different domains");
  }
  if (fine_grid.n() % coarse_grid.n() != 0) {
    std::ostringstream msg;
    msg << "l1_error: fine n = " << fine_grid.n() << " is not a multiple of coarse n = "
        << coarse_grid.n();
    throw ProjectionError(msg.str());
  }
  if (coarse.u.size() != coarse_grid.n() || fine.u.size() != fine_grid.n())
    throw ProjectionError("l1_error: state size does not match its grid");
  if (std::abs(coarse.t - fine.t) > 1e-12 * std::max(1.0, std::abs(coarse.t))) {
    std::ostringstream msg;
    msg << "l1_error: states at different times " << coarse.t << " and " << fine.t;
    throw ProjectionError(msg.str());
  }
  const std::size_t ratio = fine_grid.n() / coarse_grid.n();
  double sum = 0.0;
  for (std::size_t j = 0; j < coarse_grid.n(); ++j) {
    double avg = 0.0;
    for (std::size_t k = 0; k < ratio; ++k) avg += fine.u[j * ratio + k];
    avg /= static_cast<double>(ratio);
    sum += std::abs(coarse.u[j] - avg);
  }
  return sum * coarse_grid.dx();
}

std::vector<double> oracle_cell_averages(const Grid& grid, const ExactSolution& exact, double t) {
  if (!exact.validity.contains(t)) {
    std::ostringstream msg;
    msg << "oracle is not valid at t = " << t << " (valid on [" << exact.validity.lo << ", "
        << exact.validity.hi << "])";
    throw ValidityError(msg.str());
  }
  std::vector<double> breaks = exact.kinks(t);
  std::sort(breaks.begin(), breaks.end());
  auto f = [&exact, t](double x) { return exact(x, t); };
  std::vector<double> out(grid.n());
  const auto& e = grid.edges();
  for (std::size_t j = 0; j < grid.n(); ++j)
    out[j] = gauss16().integrate_pieces(f, e[j], e[j + 1], breaks) / (e[j + 1] - e[j]);
  return out;
}

double l1_error_vs_oracle(const State& state, const Grid& grid, const ExactSolution& exact,
                          double t) {
  const auto avg = oracle_cell_averages(grid, exact, t);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.n(); ++j) sum += std::abs(state.u[j] - avg[j]);
  return sum * grid.dx();
}

std::vector<double> ooc(std::span<const Resolution> errors) {
  std::vector<double> rates;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k].n != 2 * errors[k - 1].n) {
      std::ostringstream msg;
      msg << "resolutions must double: " << errors[k - 1].n << " is followed by " << errors[k].n;
      throw SequencingError(msg.str());
    }
    rates.push_back(std::log2(errors[k - 1].l1_error / errors[k].l1_error));
  }
  return rates;
}

double fitted_order(std::span<const Resolution> errors) {
  if (errors.size() < 2) throw SequencingError("fitted order needs at least two resolutions");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& r : errors) {
    mx += -std::log(static_cast<double>(r.n));
    my += std::log(r.l1_error);
  }
  mx /= static_cast<double>(errors.size());
  my /= static_cast<double>(errors.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& r : errors) {
    const double dx = -std::log(static_cast<double>(r.n)) - mx;
    sxy += dx * (std::log(r.l1_error) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ErrorReport make_error_report(std::span<const Resolution> errors, std::string reference,
                              std::string config_digest) {
  const auto rates = ooc(errors);
  ErrorReport report;
  report.reference = std::move(reference);
  report.config_digest = std::move(config_digest);
  for (std::size_t k = 0; k < errors.size(); ++k) {
    ErrorRow row{errors[k].n, errors[k].l1_error, std::nullopt};
    if (k > 0) row.ooc = rates[k - 1];
    report.rows.push_back(row);
  }
  return report;
}

double spatial_tv(std::span<const double> u) {
  double tv = 0.0;
  for (std::size_t j = 1; j < u.size(); ++j) tv += std::abs(u[j] - u[j - 1]);
  return tv;
}

double spatial_tv(const State& state, const Grid&) { return spatial_tv(state.u); }

double spatial_tv(const State& state, const Grid& grid, std::size_t subdomain) {
  if (subdomain >= grid.subdomain_count()) throw ValidationError("no such subdomain");
  const std::size_t b = grid.subdomain_begin(subdomain);
  const std::size_t e = grid.subdomain_end(subdomain);
  return spatial_tv(std::span<const double>(state.u).subspan(b, e - b));
}

double spatial_tv_subdomain_wise(const State& state, const Grid& grid) {
  double tv = 0.0;
  for (std::size_t i = 0; i < grid.subdomain_count(); ++i) tv += spatial_tv(state, grid, i);
  return tv;
}

double temporal_tv(const Trajectory& trajectory, std::size_t cell) {
  if (!trajectory.temporal_increments)
    throw MissingDataError("trajectory was recorded without temporal increments");
  return trajectory.temporal_increments->at(cell);
}

double max_temporal_tv(const Trajectory& trajectory) {
  if (!trajectory.temporal_increments)
    throw MissingDataError("trajectory was recorded without temporal increments");
  const auto& acc = *trajectory.temporal_increments;
  return acc.empty() ? 0.0 : *std::max_element(acc.begin(), acc.end());
}

double flux_lipschitz_in_space(const Trajectory& trajectory, const Grid& grid,
                               const PiecewiseFlux& pf) {
  if (trajectory.levels.empty() || trajectory.levels.size() != trajectory.step_dt.size() + 1)
    throw MissingDataError("flux Lipschitz quotient needs all time levels retained");
  const std::size_t steps = trajectory.step_dt.size();
  const std::size_t n = grid.n();
  // weighted[j * steps + k] = f(u_j^k) dt_k
  std::vector<double> weighted(n * steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& u = trajectory.levels[k].u;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& seg = pf.segment(grid.subdomain_of_cell()[j]);
      weighted[j * steps + k] = seg.eval(u[j]) * trajectory.step_dt[k];
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i < grid.subdomain_count(); ++i) {
    const std::size_t b = grid.subdomain_begin(i);
    const std::size_t e = grid.subdomain_end(i);
    for (std::size_t j = b; j < e; ++j) {
      const double* hj = weighted.data() + j * steps;
      for (std::size_t jj = j + 1; jj < e; ++jj) {
        const double* hjj = weighted.data() + jj * steps;
        double sum = 0.0;
        for (std::size_t k = 0; k < steps; ++k) sum += std::abs(hj[k] - hjj[k]);
        best = std::max(best, sum / (static_cast<double>(jj - j) * grid.dx()));
      }
    }
  }
  return best;
}

std::vector<double> entropy_constants(const Interval& range, std::size_t count) {
  std::vector<double> c;
  if (count == 1) return {0.5 * (range.lo + range.hi)};
  for (std::size_t k = 0; k < count; ++k) {
    c.push_back(k + 1 == count ? range.hi
                               : range.lo + range.width() * (static_cast<double>(k) /
                                                             static_cast<double>(count - 1)));
  }
  return c;
}

EntropyResidualReport entropy_residual(const Trajectory& trajectory, const Grid& grid,
                                       const PiecewiseFlux& pf, std::span<const double> c_samples) {
  if (trajectory.levels.empty() || trajectory.levels.size() != trajectory.step_dt.size() + 1)
    throw MissingDataError("entropy residual needs all time levels retained");
  EntropyResidualReport report;
  report.sampled_c.assign(c_samples.begin(), c_samples.end());
  report.max_residual = -std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> adapted;
  for (double c : c_samples) adapted.push_back(adapted_constants(pf, c));

  const double dx = grid.dx();
  for (std::size_t k = 0; k < trajectory.step_dt.size(); ++k) {
    const auto& u0 = trajectory.levels[k].u;
    const auto& u1 = trajectory.levels[k + 1].u;
    const double dt = trajectory.step_dt[k];
    for (std::size_t i = 0; i < grid.subdomain_count(); ++i) {
      const auto& seg = pf.segment(i);
      const std::size_t first = grid.subdomain_begin(i) + 1;
      for (std::size_t j = first; j < grid.subdomain_end(i); ++j) {
        const double f_here = seg.eval(u0[j]);
        const double f_left = seg.eval(u0[j - 1]);
        for (std::size_t m = 0; m < adapted.size(); ++m) {
          const double ci = adapted[m][i];
          const double fc = seg.eval(ci);
          const double r = (std::abs(u1[j] - ci) - std::abs(u0[j] - ci)) / dt +
                           (std::abs(f_here - fc) - std::abs(f_left - fc)) / dx;
          if (r > report.max_residual) {
            report.max_residual = r;
            report.cell = j;
            report.step = k;
            report.c = c_samples[m];
          }
        }
      }
    }
  }
  if (report.max_residual == -std::numeric_limits<double>::infinity()) report.max_residual = 0.0;
  return report;
}

}  // namespace dflux
