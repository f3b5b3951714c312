#include "dflux/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dflux/errors.hpp"
#include "dflux/quadrature.hpp"

namespace dflux {

namespace {

bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); }

std::size_t smallest_denominator(double ratio) {
  for (std::size_t q = 1; q <= 1000000; ++q) {
    if (near_integer(ratio * static_cast<double>(q))) return q;
  }
  return 0;
}

void check_table_datum(const TableDatum& t) {
  if (t.x.size() < 2 || t.x.size() != t.u.size())
    throw DomainError("table datum needs at least two (x, u) samples of equal length");
  for (std::size_t k = 1; k < t.x.size(); ++k) {
    if (!(t.x[k - 1] < t.x[k])) throw DomainError("table datum x samples must be increasing");
  }
}

double table_value(const TableDatum& t, double x) {
  const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  if (it == t.x.begin()) return t.u.front();
  if (it == t.x.end()) return t.u.back();
  const std::size_t k = static_cast<std::size_t>(it - t.x.begin());
  const double w = (x - t.x[k - 1]) / (t.x[k] - t.x[k - 1]);
  return (1.0 - w) * t.u[k - 1] + w * t.u[k];
}

double piecewise_value(const PiecewiseConstantDatum& d, double x) {
  const auto it = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), x);
  return d.values[static_cast<std::size_t>(it - d.breakpoints.begin())];
}

std::vector<double> average_piecewise(const PiecewiseConstantDatum& d, const Grid& grid) {
  if (d.values.size() != d.breakpoints.size() + 1)
    throw DomainError("piecewise-constant datum needs one more value than breakpoints");
  for (std::size_t k = 0; k < d.breakpoints.size(); ++k) {
    const double b = d.breakpoints[k];
    if (b < grid.xmin() || b > grid.xmax()) {
      std::ostringstream msg;
      msg << "jump at x = " << b << " lies outside the domain [" << grid.xmin() << ", "
          << grid.xmax() << "]";
      throw DomainError(msg.str());
    }
    if (k > 0 && !(d.breakpoints[k - 1] < b))
      throw DomainError("piecewise-constant breakpoints must be strictly increasing");
  }
  std::vector<double> out(grid.n());
  const auto& e = grid.edges();
  for (std::size_t j = 0; j < grid.n(); ++j) {
    const double a = e[j];
    const double b = e[j + 1];
    auto first = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), a);
    auto last = std::lower_bound(first, d.breakpoints.end(), b);
    std::size_t piece = static_cast<std::size_t>(first - d.breakpoints.begin());
    if (first == last) {
      out[j] = d.values[piece];
      continue;
    }
    double sum = 0.0;
    double left = a;
    for (auto it = first; it != last; ++it, ++piece) {
      sum += d.values[piece] * (*it - left);
      left = *it;
    }
    sum += d.values[piece] * (b - left);
    out[j] = sum / (b - a);
  }
  return out;
}

}  // namespace

std::size_t alignment_modulus(double xmin, double xmax, const std::vector<double>& interfaces) {
  std::size_t m = 1;
  for (double xi : interfaces) {
    const std::size_t q = smallest_denominator((xi - xmin) / (xmax - xmin));
    if (q == 0) return 0;
    m = std::lcm(m, q);
  }
  return m;
}

Grid build_grid(double xmin, double xmax, const std::vector<double>& interfaces, std::size_t n) {
  if (!(xmin < xmax)) throw ValidationError("grid needs xmin < xmax");
  if (n == 0) throw ValidationError("grid needs at least one cell");
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const double xi = interfaces[i];
    if (!(xi > xmin && xi < xmax) || (i > 0 && !(interfaces[i - 1] < xi))) {
      throw ValidationError("interfaces must be strictly increasing and inside (xmin, xmax)");
    }
  }

  Grid g;
  g.xmin_ = xmin;
  g.xmax_ = xmax;
  g.n_ = n;
  g.dx_ = (xmax - xmin) / static_cast<double>(n);
  g.edges_.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    g.edges_[j] = xmin + (xmax - xmin) * (static_cast<double>(j) / static_cast<double>(n));
  g.edges_[n] = xmax;

  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const double pos = (interfaces[i] - xmin) / g.dx_;
    const double k = std::round(pos);
    if (!near_integer(pos) || k <= 0.0 || k >= static_cast<double>(n)) {
      std::ostringstream msg;
      msg << "interface " << i + 1 << " at x = " << interfaces[i] << " is not a cell edge for n = "
          << n;
      const std::size_t m = alignment_modulus(xmin, xmax, interfaces);
      if (m > 0) {
        const std::size_t below = (n / m) * m;
        msg << "; nearest admissible n: ";
        if (below > 0) msg << below << ", ";
        msg << below + m;
      }
      throw AlignmentError(msg.str());
    }
    const auto p = static_cast<std::size_t>(k);
    if (!g.interface_cells_.empty() && p <= g.interface_cells_.back())
      throw AlignmentError("two interfaces fall on the same cell edge");
    g.interface_cells_.push_back(p);
    g.edges_[p] = interfaces[i];
  }

  g.subdomain_of_cell_.resize(n);
  for (std::size_t i = 0; i < g.subdomain_count(); ++i) {
    for (std::size_t j = g.subdomain_begin(i); j < g.subdomain_end(i); ++j)
      g.subdomain_of_cell_[j] = i;
  }
  return g;
}

double evaluate(const InitialDatum& u0, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PiecewiseConstantDatum>) {
          return piecewise_value(d, x);
        } else if constexpr (std::is_same_v<T, SmoothDatum>) {
          return d.fn(x);
        } else {
          return table_value(d, x);
        }
      },
      u0);
}

std::vector<double> cell_average(const InitialDatum& u0, const Grid& grid) {
  if (const auto* pc = std::get_if<PiecewiseConstantDatum>(&u0)) return average_piecewise(*pc, grid);

  std::vector<double> out(grid.n());
  const auto& e = grid.edges();
  if (const auto* smooth = std::get_if<SmoothDatum>(&u0)) {
    if (!smooth->fn) throw DomainError("smooth datum has no function");
    for (std::size_t j = 0; j < grid.n(); ++j)
      out[j] = gauss5().integrate(smooth->fn, e[j], e[j + 1]) / (e[j + 1] - e[j]);
    return out;
  }

  const auto& table = std::get<TableDatum>(u0);
  check_table_datum(table);
  const double slack = 1e-12 * std::max(1.0, grid.xmax() - grid.xmin());
  if (table.x.front() > grid.xmin() + slack || table.x.back() < grid.xmax() - slack)
    throw DomainError("table datum does not cover the domain");
  auto f = [&table](double x) { return table_value(table, x); };
  for (std::size_t j = 0; j < grid.n(); ++j)
    out[j] = gauss5().integrate_pieces(f, e[j], e[j + 1], table.x) / (e[j + 1] - e[j]);
  return out;
}

}  // namespace dflux
