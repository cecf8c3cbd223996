#include "finitecell/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "finitecell/model.hpp"

namespace finitecell {

double harmonic_number(int n) {
  if (n < 1) throw std::invalid_argument("harmonic number needs n >= 1");
  double sum = 0.0;
  for (int k = n; k >= 1; --k) sum += 1.0 / k;  // small terms first
  return sum;
}

double harmonic_number_asymptotic(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("harmonic number needs n > 0");
  return std::log(n) + std::numbers::egamma + 1.0 / (2.0 * n) -
         1.0 / (12.0 * n * n);
}

WorstCaseErgodic worst_ergodic_alpha4(int n_aps, double shadow_sigma_db) {
  if (n_aps < 3) {
    throw std::domain_error("closed form needs at least 3 APs");
  }
  if (!(shadow_sigma_db >= 0.0) || !std::isfinite(shadow_sigma_db)) {
    throw std::invalid_argument("shadow_sigma_db must be non-negative");
  }
  const double n = n_aps;
  const double sz = sigma_z_from_db(shadow_sigma_db);
  const double sz2 = sz * sz;
  const double b = 2.0 * std::exp(sz2) / (3.0 * (n - 2.0));

  const double bracket =
      std::numbers::egamma + 1.0 / (2.0 * n) +
      std::log(n * std::sqrt(n - 2.0) / std::pow(n - 1.0, 1.5)) +
      0.5 * std::log((n - 2.0) / (n - 1.0)) + 0.5 * std::log1p(b) +
      (std::pow(1.0 + b, n) - 1.0) *
          (std::log((1.0 + 1.5 * std::exp(-sz2) * (n - 2.0)) / (n - 1.0)) -
           1.0 / (2.0 * (n - 1.0)));

  WorstCaseErgodic out;
  out.capacity_bps_hz = n / std::numbers::ln2 * bracket;
  out.expansion_guard_exceeded = sz2 >= std::log(1.5);
  return out;
}

}  // namespace finitecell
