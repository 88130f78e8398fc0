#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vanet/quadrature.hpp"

using vanet::integrate;
using vanet::integrate_split;
using vanet::QuadratureSpec;

TEST_SUITE("quadrature") {
  TEST_CASE("simpson is exact for cubics") {
    auto f = [](double x) { return 3 * x * x * x - x + 2; };
    // integral over [0, 2] = 3*4 - 2 + 4 = 14
    CHECK(vanet::simpson(f, 0.0, 2.0, 2) == doctest::Approx(14.0).epsilon(1e-14));
    CHECK_THROWS_AS(vanet::simpson(f, 0.0, 1.0, 3), std::invalid_argument);
  }

  TEST_CASE("integrate reaches the requested tolerance") {
    QuadratureSpec spec;
    const double v = integrate([](double x) { return std::exp(-x); }, 0.0, 5.0, spec);
    CHECK(v == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-7));
    const double s = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, spec);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-7));
  }

  TEST_CASE("empty interval is zero") {
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0, QuadratureSpec{}) == 0.0);
  }

  TEST_CASE("kinked integrand benefits from a split") {
    QuadratureSpec spec;
    auto f = [](double x) { return std::fabs(x - 0.3); };
    const double v = integrate_split(f, 0.0, 1.0, {0.3}, spec);
    CHECK(v == doctest::Approx(0.045 + 0.245).epsilon(1e-12));
  }

  TEST_CASE("non-convergence is reported") {
    QuadratureSpec spec;
    spec.max_panels = 32;
    spec.rel_tol = 1e-15;
    spec.abs_tol = 0.0;
    auto f = [](double x) { return std::sin(200.0 * x); };
    CHECK_THROWS_AS(integrate(f, 0.0, 3.0, spec), vanet::NonConvergenceError);
  }

  TEST_CASE("spec validation") {
    QuadratureSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.initial_panels = 6;
    CHECK_THROWS(spec.validate());
    spec = {};
    spec.initial_panels = 9;
    CHECK_THROWS(spec.validate());
    spec = {};
    spec.rel_tol = 0.0;
    CHECK_THROWS(spec.validate());
  }
}
