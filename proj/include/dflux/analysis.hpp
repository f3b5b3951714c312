#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dflux/flux_model.hpp"
#include "dflux/grid.hpp"
#include "dflux/oracle.hpp"
#include "dflux/solver.hpp"

namespace dflux {

struct ErrorRow {
  std::size_t n = 0;
  double l1_error = 0.0;
  std::optional<double> ooc;  // empty for the first row
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  std::string reference;  // e.g. "numerical n=2048"
  std::string config_digest;
};

struct Resolution {
  std::size_t n = 0;
  double l1_error = 0.0;
};

// Fine solution averaged onto the coarse cells, then sum |difference| * dx.
// Throws ProjectionError for non-nested grids or mismatched times.
double l1_error(const State& coarse, const Grid& coarse_grid, const State& fine,
                const Grid& fine_grid);

// Sum over cells of |u_j - cell average of the exact solution| * dx, with
// 16-point Gauss on each smooth piece of the cell. Throws ValidityError.
double l1_error_vs_oracle(const State& state, const Grid& grid, const ExactSolution& exact,
                          double t);

// Cell averages of an exact solution (same quadrature as above).
std::vector<double> oracle_cell_averages(const Grid& grid, const ExactSolution& exact, double t);

// rate_k = log2(e_{k-1} / e_k); n must double from row to row.
std::vector<double> ooc(std::span<const Resolution> errors);

// Least-squares slope of log(error) against log(dx) = -log(n) + const.
double fitted_order(std::span<const Resolution> errors);

ErrorReport make_error_report(std::span<const Resolution> errors, std::string reference,
                              std::string config_digest);

double spatial_tv(std::span<const double> u);
double spatial_tv(const State& state, const Grid& grid);
// Variation inside D_i only, including its ghost cell.
double spatial_tv(const State& state, const Grid& grid, std::size_t subdomain);
// Sum over subdomains; the pairs straddling each interface are skipped.
double spatial_tv_subdomain_wise(const State& state, const Grid& grid);

// Accumulated sum_n |u_j^{n+1} - u_j^n|. Throws MissingDataError when the
// run did not accumulate increments.
double temporal_tv(const Trajectory& trajectory, std::size_t cell);
double max_temporal_tv(const Trajectory& trajectory);

// max over cell pairs j < j' of one subdomain of
//   sum_n |f(u_j^n) - f(u_j'^n)| dt_n / |x_j - x_j'|.
// Needs retained levels.
double flux_lipschitz_in_space(const Trajectory& trajectory, const Grid& grid,
                               const PiecewiseFlux& pf);

struct EntropyResidualReport {
  double max_residual = 0.0;
  std::size_t cell = 0;
  std::size_t step = 0;
  double c = 0.0;  // base constant; subdomain constants follow by adaption
  std::vector<double> sampled_c;
};

// `count` equispaced constants spanning the interval.
std::vector<double> entropy_constants(const Interval& range, std::size_t count = 17);

// max of (eta_j^{n+1} - eta_j^n) / dt_n + (q_j^n - q_{j-1}^n) / dx over
// interior cells of each subdomain (ghost cells and the left boundary cell
// excluded), all steps and all sampled c, with eta = |u - c_i| and
// q = |f^(i)(u) - f^(i)(c_i)| for the adapted constants c_i.
EntropyResidualReport entropy_residual(const Trajectory& trajectory, const Grid& grid,
                                       const PiecewiseFlux& pf, std::span<const double> c_samples);

}  // namespace dflux
