#include <cmath>
#include <numbers>

#include "doctest.h"
#include "finitecell/quadrature.hpp"

using namespace finitecell;

TEST_CASE("polynomials are integrated to machine precision") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  auto s = integrate([](double x) { return 3.0 * x * x - 2.0 * x + 1.0; },
                     -1.0, 2.0);
  CHECK(s.value == doctest::Approx(9.0 - 3.0 + 3.0).epsilon(1e-14));
}

TEST_CASE("smooth transcendental integrand") {
  auto r = integrate([](double x) { return std::sin(x); }, 0.0,
                     std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("reversed bounds flip the sign") {
  auto r = integrate([](double x) { return x * x; }, 1.0, 0.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("empty interval integrates to zero") {
  auto r = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
}

TEST_CASE("a kink is handled, and a seeded breakpoint speeds it up") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);

  // Without a seeded breakpoint the kink limits accuracy to roughly the
  // requested tolerance (rel_tol 1e-8), not machine precision.
  auto plain = integrate(f, 0.0, 1.0);
  CHECK(plain.converged);
  CHECK(plain.value == doctest::Approx(exact).epsilon(1e-7));

  const double bp[] = {0.3};
  auto seeded = integrate(f, 0.0, 1.0, {}, bp);
  CHECK(seeded.converged);
  CHECK(seeded.value == doctest::Approx(exact).epsilon(1e-13));
  CHECK(seeded.panels <= plain.panels);
}

TEST_CASE("power-law decay over many decades with geometric seeding") {
  // integral of x^-1.5 from 1 to 1e8 = 2 (1 - 1e-4)
  auto f = [](double x) { return std::pow(x, -1.5); };
  auto bps = geometric_breakpoints(1.0, 1e8);
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  auto r = integrate(f, 1.0, 1e8, opt, bps);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0 * (1.0 - 1e-4)).epsilon(1e-9));
}

TEST_CASE("panel budget exhaustion is reported, not hidden") {
  QuadratureOptions opt;
  opt.max_panels = 2;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-14;
  auto f = [](double x) { return std::sin(50.0 * x); };
  auto r = integrate(f, 0.0, 20.0, opt);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(integrate_or_throw(f, 0.0, 20.0, opt), QuadratureError);
}

TEST_CASE("quadrature error carries the best value seen") {
  QuadratureOptions opt;
  opt.max_panels = 1;
  opt.abs_tol = 1e-16;
  opt.rel_tol = 1e-16;
  try {
    integrate_or_throw([](double x) { return std::exp(x); }, 0.0, 3.0, opt);
    FAIL("expected a quadrature error");
  } catch (const QuadratureError& e) {
    CHECK(e.value() == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-3));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("non-finite bounds are rejected") {
  CHECK_THROWS_AS(
      integrate([](double x) { return x; }, 0.0,
                std::numeric_limits<double>::infinity()),
      std::invalid_argument);
}

TEST_CASE("geometric breakpoints stay inside the range") {
  auto pts = geometric_breakpoints(1e-3, 1e3);
  REQUIRE(!pts.empty());
  for (double p : pts) {
    CHECK(p > 1e-3);
    CHECK(p < 1e3);
  }
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
  CHECK(geometric_breakpoints(-1.0, 2.0).empty());
  CHECK(geometric_breakpoints(2.0, 1.0).empty());
}
