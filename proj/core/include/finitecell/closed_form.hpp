#pragma once

// Closed-form shortcut for the ergodic rate of the centre user at path
// loss exponent 4, obtained by expanding the matched lognormal around
// the dominant interference term and integrating term by term.
//
// The expansion parameter is b = 2 e^(sigma_z^2) / (3 (n - 2)); the
// series behind it only converges for sigma_z^2 < ln(3/2), so the result
// carries a guard flag instead of silently extrapolating.

namespace finitecell {

// Sum of 1/k for k = 1..n, exact summation.
double harmonic_number(int n);

// ln n + gamma + 1/(2n) - 1/(12 n^2); useful for large n.
double harmonic_number_asymptotic(double n);

struct WorstCaseErgodic {
  double capacity_bps_hz = 0.0;
  // Set when the expansion parameter leaves its convergence region
  // (sigma_z^2 >= ln(3/2)); the value is then an extrapolation.
  bool expansion_guard_exceeded = false;
};

// Requires n_aps >= 3 (the expansion divides by n - 2) and a centred,
// interference-limited scenario with path loss exponent 4.
WorstCaseErgodic worst_ergodic_alpha4(int n_aps, double shadow_sigma_db);

}  // namespace finitecell
