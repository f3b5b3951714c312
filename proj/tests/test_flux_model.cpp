#include <doctest.h>

#include <cmath>
#include <random>

#include "dflux/errors.hpp"
#include "dflux/flux_model.hpp"
#include "oracles.hpp"

using namespace dflux;

namespace {

PiecewiseFlux exp1_flux() {
  return PiecewiseFlux({0.0}, {FluxSegment::linear(1.0), FluxSegment::quadratic(1.0)});
}

PiecewiseFlux exp2_flux() {
  return PiecewiseFlux({0.0}, {FluxSegment::quadratic(1.0), FluxSegment::linear(1.0)});
}

FluxSegment cubic() {
  return FluxSegment::user([](double u) { return u + u * u * u; },
                           [](double u) { return 1.0 + 3.0 * u * u; }, "u+u^3");
}

}  // namespace

TEST_CASE("segment_at picks the subdomain") {
  const auto pf = exp1_flux();
  CHECK(segment_at(pf, -0.3) == 0);
  CHECK(segment_at(pf, 0.7) == 1);

  const PiecewiseFlux three({-1.0, 2.0}, {FluxSegment::linear(1.0), FluxSegment::linear(2.0),
                                          FluxSegment::linear(3.0)});
  CHECK(segment_at(three, 0.0) == 1);
  CHECK(segment_at(three, -5.0) == 0);
  CHECK(segment_at(three, 7.0) == 2);
  CHECK_THROWS_AS(segment_at(three, 2.0), InterfaceAmbiguityError);
}

TEST_CASE("segment_at is constant on each subdomain") {
  const PiecewiseFlux three({-1.0, 2.0}, {FluxSegment::linear(1.0), FluxSegment::linear(2.0),
                                          FluxSegment::linear(3.0)});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mid(-1.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    CHECK(segment_at(three, mid(rng)) == 1);
    CHECK(segment_at(three, std::nextafter(-1.0, 0.0)) == 1);
    CHECK(segment_at(three, std::nextafter(2.0, 0.0)) == 1);
  }
}

TEST_CASE("piecewise flux shape is validated") {
  CHECK_THROWS_AS(PiecewiseFlux({0.0}, {FluxSegment::linear(1.0)}), ValidationError);
  CHECK_THROWS_AS(PiecewiseFlux({1.0, 0.0}, {FluxSegment::linear(1.0), FluxSegment::linear(1.0),
                                             FluxSegment::linear(1.0)}),
                  ValidationError);
  CHECK(PiecewiseFlux(FluxSegment::linear(2.0)).interface_count() == 0);
}

TEST_CASE("invert builtins") {
  CHECK(invert(FluxSegment::quadratic(1.0), 2.0, {0.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(invert(FluxSegment::linear(1.0), 0.5, {0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(invert(FluxSegment::linear(2.0, 1.0), 5.0, {0.0, 4.0}) == doctest::Approx(2.0));
  CHECK(invert(FluxSegment::quadratic(2.0, 1.0), 2.0 * 9.0 / 2.0 + 3.0, {0.0, 4.0}) ==
        doctest::Approx(3.0));
  CHECK_THROWS_AS(invert(FluxSegment::quadratic(1.0), 100.0, {0.0, 4.0}), RangeError);
}

TEST_CASE("invert user cubic matches bisection") {
  const auto seg = cubic();
  const double oracle =
      testing::bisect([](double u) { return u + u * u * u; }, 10.0, 0.0, 5.0, 1e-14);
  CHECK(std::abs(oracle - 2.0) <= 1e-12);
  const double u = invert(seg, 10.0, {0.0, 5.0});
  CHECK(std::abs(u - oracle) <= 1e-12);
  CHECK(std::abs(invert_unbounded(seg, 10.0, 0.0) - 2.0) <= 1e-12);
}

TEST_CASE("invert round trip on 1000 samples") {
  const Interval range{0.5, 4.5};
  for (const auto& seg : {FluxSegment::linear(1.0), FluxSegment::linear(3.0, -2.0),
                          FluxSegment::quadratic(1.0), FluxSegment::quadratic(0.5, 1.0), cubic()}) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pick(range.lo, range.hi);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double u = pick(rng);
      worst = std::max(worst, std::abs(invert(seg, seg.eval(u), range) - u));
    }
    CHECK(worst <= 1e-11);
  }
}

TEST_CASE("validated_on sets alpha and rejects non-monotone fluxes") {
  const auto burgers = FluxSegment::quadratic(1.0).validated_on({0.5, 4.5});
  CHECK(burgers.alpha() == doctest::Approx(0.999 * 0.5));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pick(0.5, 4.5);
  for (int k = 0; k < 1000; ++k) CHECK(burgers.deriv(pick(rng)) >= burgers.alpha());
  CHECK(burgers.alpha() > 0.0);

  CHECK_THROWS_AS(FluxSegment::quadratic(1.0).validated_on({-1.0, 1.0}), MonotonicityError);
  CHECK_THROWS_AS(FluxSegment::linear(-1.0).validated_on({0.0, 1.0}), MonotonicityError);

  // deriv inconsistent with eval
  const auto liar = FluxSegment::user([](double u) { return u; }, [](double) { return 2.0; });
  CHECK_THROWS_AS(liar.validated_on({0.0, 1.0}), ValidationError);

  CHECK(cubic().validated_on({0.0, 2.0}).alpha() == doctest::Approx(0.999));
}

TEST_CASE("max_wave_speed") {
  CHECK(max_wave_speed(exp1_flux(), {0.5, 2.0}) == doctest::Approx(2.0));
  CHECK(max_wave_speed(PiecewiseFlux(FluxSegment::linear(3.0)), {-7.0, 11.0}) == 3.0);
  CHECK(max_wave_speed(exp2_flux(), {2.0, 3.0}) == doctest::Approx(3.0));
}

TEST_CASE("max_wave_speed is monotone in the interval") {
  const auto pf = PiecewiseFlux({0.0}, {cubic(), FluxSegment::quadratic(1.0)});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pick(0.1, 3.0);
  for (int k = 0; k < 200; ++k) {
    double a = pick(rng);
    double b = pick(rng);
    if (a > b) std::swap(a, b);
    const double grow = pick(rng);
    CHECK(max_wave_speed(pf, {a - 0.05 * grow, b + grow}) >= max_wave_speed(pf, {a, b}));
  }
}

TEST_CASE("invariant_interval") {
  const auto e1 = invariant_interval(exp1_flux(), {0.5, 2.0});
  CHECK(e1.lo == doctest::Approx(0.5));
  CHECK(e1.hi == doctest::Approx(2.0));

  const auto e2 = invariant_interval(exp2_flux(), {2.0, 3.0});
  CHECK(e2.lo == doctest::Approx(2.0));
  CHECK(e2.hi == doctest::Approx(4.5));

  const auto ranges = subdomain_ranges(exp2_flux(), {2.0, 3.0});
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[0] == Interval{2.0, 3.0});
  CHECK(ranges[1].hi == doctest::Approx(4.5));

  const Interval data{-3.0, 1.25};
  CHECK(invariant_interval(PiecewiseFlux(FluxSegment::linear(2.0)), data) == data);
}

TEST_CASE("interface map and adapted constants") {
  const auto pf = exp1_flux();
  CHECK(interface_map(pf, 1, 0.5, {0.0, 4.0}) == doctest::Approx(1.0));
  CHECK(interface_map(pf, 1, 2.0, {0.0, 4.0}) == doctest::Approx(2.0));

  const auto c = adapted_constants(pf, 0.5);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 0.5);
  CHECK(c[1] == doctest::Approx(1.0));

  // f^(1)(c_1) == f^(0)(c_0) along a three-segment chain
  const PiecewiseFlux chain({-1.0, 1.0},
                            {FluxSegment::quadratic(1.0), cubic(), FluxSegment::linear(0.5, 1.0)});
  const auto cc = adapted_constants(chain, 1.3);
  for (std::size_t i = 1; i < cc.size(); ++i)
    CHECK(chain.segment(i).eval(cc[i]) == doctest::Approx(chain.segment(i - 1).eval(cc[i - 1])));
}
