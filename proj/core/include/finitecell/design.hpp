#pragma once

// Deployment sizing and sweep helpers built on the coverage engine.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "finitecell/model.hpp"

namespace finitecell {

// Raised when no admissible AP count meets the target.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, int best_n, double best_value)
      : std::runtime_error(what), best_n_(best_n), best_value_(best_value) {}
  int best_n() const { return best_n_; }
  double best_value() const { return best_value_; }

 private:
  int best_n_;
  double best_value_;
};

struct DesignQuery {
  NetworkModel base;             // n_aps is overwritten during the search
  double min_rate_bps_hz = 5.0;  // sum-rate target C0
  double min_probability = 0.6;  // required P[rate >= C0]
  int n_max = 4096;              // search ceiling
  // With noise modelled, the target must hold at the centre and at the
  // disk edge; interference-limited scenarios are checked at the centre
  // (their worst point).
  bool check_edge = true;
};

struct DesignResult {
  int n_aps = 0;
  double achieved = 0.0;
  bool used_linear_scan = false;  // bracketing saw non-monotone values
  int evaluations = 0;
};

// Smallest AP count whose capacity coverage meets the target.  Grows a
// bracket by doubling, bisects it, then verifies the boundary; if the
// metric is locally non-monotone the verification fails and the search
// falls back to a linear scan.
DesignResult required_aps(const DesignQuery& query);

// Coverage probability across evaluation offsets, one scenario.
std::vector<double> radial_profile(const NetworkModel& model,
                                   double threshold,
                                   std::span<const double> offsets);

struct DensityPoint {
  double density_per_km2 = 0.0;
  int n_aps = 0;
  double coverage = 0.0;
};
// Coverage at a fixed threshold and offset as the AP density varies.
std::vector<DensityPoint> density_sweep(const NetworkModel& base,
                                        std::span<const double> densities,
                                        double threshold, double offset);

struct SnrPoint {
  double snr_db = 0.0;
  double noise_power_dbm = 0.0;
  double coverage = 0.0;
};
// Coverage as the noise floor varies; snr_db is the edge SNR, i.e. the
// mean received power at distance `radius` over the noise power.
std::vector<SnrPoint> snr_sweep(const NetworkModel& base,
                                std::span<const double> snr_db,
                                double threshold, double offset);

}  // namespace finitecell
