#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

namespace dflux {

/// Uniform cell geometry on [xmin, xmax] with every flux interface on a cell
/// edge: edges()[interface_cells()[i-1]] == xi_i. Cell P_i is the first cell
/// of subdomain D_i.
class Grid {
 public:
  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }
  double dx() const { return dx_; }
  std::size_t n() const { return n_; }

  const std::vector<double>& edges() const { return edges_; }
  double center(std::size_t j) const { return 0.5 * (edges_[j] + edges_[j + 1]); }

  // P_1..P_N.
  const std::vector<std::size_t>& interface_cells() const { return interface_cells_; }
  const std::vector<std::size_t>& subdomain_of_cell() const { return subdomain_of_cell_; }
  std::size_t subdomain_count() const { return interface_cells_.size() + 1; }

  // Half-open cell range [begin, end) of subdomain i.
  std::size_t subdomain_begin(std::size_t i) const { return i == 0 ? 0 : interface_cells_[i - 1]; }
  std::size_t subdomain_end(std::size_t i) const {
    return i + 1 < subdomain_count() ? interface_cells_[i] : n_;
  }

 private:
  friend Grid build_grid(double xmin, double xmax, const std::vector<double>& interfaces,
                         std::size_t n);
  Grid() = default;

  double xmin_ = 0.0;
  double xmax_ = 0.0;
  double dx_ = 0.0;
  std::size_t n_ = 0;
  std::vector<double> edges_;
  std::vector<std::size_t> interface_cells_;
  std::vector<std::size_t> subdomain_of_cell_;
};

// Throws AlignmentError if some interface is not on an edge for this n, with
// the nearest admissible cell counts in the message.
Grid build_grid(double xmin, double xmax, const std::vector<double>& interfaces, std::size_t n);

// Cell counts n that put every interface on an edge are multiples of this
// (within denominators up to 10^6); 0 if none was found.
std::size_t alignment_modulus(double xmin, double xmax, const std::vector<double>& interfaces);

struct PiecewiseConstantDatum {
  std::vector<double> breakpoints;  // strictly increasing
  std::vector<double> values;       // breakpoints.size() + 1 entries
};

struct SmoothDatum {
  std::function<double(double)> fn;
};

// Linear interpolation between samples; must cover the domain.
struct TableDatum {
  std::vector<double> x;
  std::vector<double> u;
};

using InitialDatum = std::variant<PiecewiseConstantDatum, SmoothDatum, TableDatum>;

// Pointwise value. Piecewise-constant data take the right value at a jump.
double evaluate(const InitialDatum& u0, double x);

// Exact averages for piecewise-constant data, 5-point Gauss per cell for
// smooth data, Gauss per table piece for tables. Throws DomainError.
std::vector<double> cell_average(const InitialDatum& u0, const Grid& grid);

}  // namespace dflux
