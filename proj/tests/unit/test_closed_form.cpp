#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "finitecell/closed_form.hpp"

using namespace finitecell;

TEST_CASE("harmonic numbers") {
  CHECK(harmonic_number(1) == 1.0);
  CHECK(harmonic_number(5) == doctest::Approx(137.0 / 60.0).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic_number(0), std::invalid_argument);
  CHECK_THROWS_AS(harmonic_number(-3), std::invalid_argument);
}

TEST_CASE("asymptotic harmonic numbers carry the documented error order") {
  // the neglected term is 1/(120 n^4): about 8.3e-10 at n = 100, while
  // the 1/(12 n^2) term it keeps is 8.3e-6
  const double err =
      std::abs(harmonic_number_asymptotic(100.0) - harmonic_number(100));
  CHECK(err < 1e-8);
  CHECK(harmonic_number_asymptotic(5.0) ==
        doctest::Approx(harmonic_number(5)).epsilon(1e-4));
}

TEST_CASE("quartic-path-loss ergodic shortcut: reference values") {
  CHECK(worst_ergodic_alpha4(3, 0.0).capacity_bps_hz ==
        doctest::Approx(2.6580247009).epsilon(1e-9));
  CHECK(worst_ergodic_alpha4(5, 0.0).capacity_bps_hz ==
        doctest::Approx(7.5538570837).epsilon(1e-9));
  CHECK(worst_ergodic_alpha4(30, 0.0).capacity_bps_hz ==
        doctest::Approx(42.8826956106).epsilon(1e-9));
  // outside the convergence region the formula turns negative; the value
  // is still reproduced bit-for-bit so downstream comparisons are stable
  const WorstCaseErgodic wide = worst_ergodic_alpha4(5, 6.0);
  CHECK(wide.expansion_guard_exceeded);
  CHECK(wide.capacity_bps_hz ==
        doctest::Approx(-687.7787931146).epsilon(1e-9));
}

TEST_CASE("quartic-path-loss ergodic shortcut: guard boundary") {
  // sigma_z^2 = (0.1 ln 10 sigma_L)^2 crosses ln(3/2) at
  // sigma_L = sqrt(ln 1.5) / (0.1 ln 10) = 2.7654...
  CHECK_FALSE(worst_ergodic_alpha4(5, 2.76).expansion_guard_exceeded);
  CHECK(worst_ergodic_alpha4(5, 2.77).expansion_guard_exceeded);
  CHECK_FALSE(worst_ergodic_alpha4(5, 0.0).expansion_guard_exceeded);
}

TEST_CASE("quartic-path-loss ergodic shortcut: domain") {
  CHECK_THROWS_AS(worst_ergodic_alpha4(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(worst_ergodic_alpha4(0, 0.0), std::domain_error);
  // monotone in the AP count without shadowing
  double prev = 0.0;
  for (int n : {3, 5, 10, 20, 30}) {
    const double v = worst_ergodic_alpha4(n, 0.0).capacity_bps_hz;
    CHECK(v > prev);
    prev = v;
  }
}
