#pragma once

// Scenario description shared by the analytic and simulation paths.
//
// A fixed number of access points is dropped uniformly at random on a
// disk.  Each downlink combines a distance power law, Rayleigh fading
// (exponential power, unit mean scaled by transmit power) and optional
// lognormal shadowing.  The receiver attaches to the nearest access
// point; the rest interfere.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "finitecell/geometry.hpp"

namespace finitecell {

inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

inline double db_from_linear(double x) {
  if (!(x > 0.0)) throw std::domain_error("dB conversion needs a positive value");
  return 10.0 * std::log10(x);
}

// Lognormal shadowing: a spread of s dB corresponds to exp(sigma_z * Z)
// with Z standard normal and sigma_z = s * ln(10) / 10.
inline double sigma_z_from_db(double sigma_db) {
  return 0.1 * std::log(10.0) * sigma_db;
}

struct NetworkModel {
  Disk disk{1.0};                  // service area, radius in km
  int n_aps = 3;                   // access points dropped on the disk
  double path_loss_exponent = 3.87;
  double shadow_sigma_db = 0.0;    // lognormal shadowing spread, dB
  double tx_power_dbm = 20.0;      // per-AP transmit power
  std::optional<double> noise_power_dbm{};  // absent: interference limited

  double sigma_z() const { return sigma_z_from_db(shadow_sigma_db); }
  double sigma_z_sq() const {
    const double s = sigma_z();
    return s * s;
  }
  double tx_power_mw() const { return linear_from_db(tx_power_dbm); }
  double noise_power_mw() const {
    return noise_power_dbm ? linear_from_db(*noise_power_dbm) : 0.0;
  }
  bool interference_limited() const { return !noise_power_dbm.has_value(); }

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// Smallest per-km^2 density consistent with the AP count, and back.
// Rounding is to nearest with ties to even.
int ap_count_from_density(double per_km2, const Disk& disk);
double density_from_ap_count(int n_aps, const Disk& disk);

}  // namespace finitecell
