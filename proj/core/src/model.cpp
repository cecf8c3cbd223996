#include "finitecell/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace finitecell {

void NetworkModel::validate() const {
  if (!(disk.radius > 0.0) || !std::isfinite(disk.radius)) {
    throw std::invalid_argument("disk radius must be positive and finite");
  }
  if (n_aps < 1) {
    throw std::invalid_argument("n_aps must be at least 1");
  }
  if (!(path_loss_exponent > 2.0) || !std::isfinite(path_loss_exponent)) {
    throw std::invalid_argument(
        "path_loss_exponent must exceed 2 (interference moments diverge "
        "otherwise)");
  }
  if (!(shadow_sigma_db >= 0.0) || !std::isfinite(shadow_sigma_db)) {
    throw std::invalid_argument("shadow_sigma_db must be non-negative");
  }
  if (!std::isfinite(tx_power_dbm)) {
    throw std::invalid_argument("tx_power_dbm must be finite");
  }
  if (noise_power_dbm && !std::isfinite(*noise_power_dbm)) {
    throw std::invalid_argument("noise_power_dbm must be finite when set");
  }
}

int ap_count_from_density(double per_km2, const Disk& disk) {
  if (!(disk.radius > 0.0)) {
    throw std::invalid_argument("disk radius must be positive");
  }
  if (!(per_km2 > 0.0) || !std::isfinite(per_km2)) {
    throw std::invalid_argument("density must be positive and finite");
  }
  const double expectation =
      per_km2 * std::numbers::pi * disk.radius * disk.radius;
  const double rounded = std::nearbyint(expectation);  // ties to even
  if (rounded < 1.0) return 1;
  if (rounded > 1e9) {
    throw std::invalid_argument("density implies an implausible AP count");
  }
  return static_cast<int>(rounded);
}

double density_from_ap_count(int n_aps, const Disk& disk) {
  if (n_aps < 1) throw std::invalid_argument("n_aps must be at least 1");
  if (!(disk.radius > 0.0)) {
    throw std::invalid_argument("disk radius must be positive");
  }
  return n_aps / (std::numbers::pi * disk.radius * disk.radius);
}

}  // namespace finitecell
