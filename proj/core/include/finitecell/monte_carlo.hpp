#pragma once

// Direct simulation of the network model.
//
// Randomness is counter based: a (seed, trial) pair fully determines a
// trial's draws, so estimates do not depend on thread count or schedule,
// and two runs with the same seed agree bit for bit.  Using one seed
// across related sweeps (e.g. a radial profile) gives common random
// numbers: the same AP layouts and channels are replayed at every sweep
// point, so differences between points are not buried in independent
// sampling noise.

#include <cstdint>
#include <span>
#include <vector>

#include "finitecell/model.hpp"

namespace finitecell {

// Inverse standard normal CDF, accurate to ~1e-15 on (0, 1).
double inverse_normal_cdf(double p);

// Deterministic per-trial random stream (splitmix-style counter mix).
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64();
  double next_uniform();      // [0, 1)
  double next_normal();       // standard normal, never infinite
  double next_exponential();  // mean 1

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// n_aps points uniform on the disk; consumes 2 uniforms per point.
std::vector<Vec2> sample_ap_positions(int n_aps, const Disk& disk,
                                      TrialStream& stream);

// SINR at the point (offset, 0) given positions and channel draws.
// fading holds unit-mean exponential powers; shadow_normals holds
// standard normals (ignored when the model has no shadowing) scaled
// inside.  The serving AP is the nearest one (first index on ties);
// its distance must be positive.
double realize_sinr(double offset, std::span<const Vec2> positions,
                    std::span<const double> fading,
                    std::span<const double> shadow_normals,
                    const NetworkModel& model);

// Draws one full trial (re-drawing layouts that put an AP exactly on the
// evaluation point) and returns its SINR.  negate_shadow flips the signs
// of the shadowing normals, which is the antithetic pairing used below.
double simulate_trial(double offset, const NetworkModel& model,
                      TrialStream& stream, bool negate_shadow = false);

struct SimConfig {
  long trials = 100000;
  std::uint64_t seed = 1;
  bool antithetic = false;  // pair trials 2k, 2k+1 with mirrored shadowing
  int threads = 0;          // 0: hardware concurrency
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

Estimate estimate_coverage(double threshold, double offset,
                           const NetworkModel& model, const SimConfig& cfg);
Estimate estimate_capacity_coverage(double min_rate_bps_hz, double offset,
                                    const NetworkModel& model,
                                    const SimConfig& cfg);
Estimate estimate_ergodic(double offset, const NetworkModel& model,
                          const SimConfig& cfg);

// Two-sided Kolmogorov-Smirnov distance of a sample against Uniform(0,1).
// The sample is copied and sorted.
double ks_statistic_uniform(std::span<const double> sample);

// Asymptotic two-sided critical value at the given significance.
double ks_critical_value(long n, double alpha = 0.01);

}  // namespace finitecell
