#include "finitecell/design.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "finitecell/coverage.hpp"

namespace finitecell {

namespace {

struct MetricCache {
  const DesignQuery& query;
  std::map<int, double> values;
  int evaluations = 0;

  double operator()(int n) {
    auto it = values.find(n);
    if (it != values.end()) return it->second;
    NetworkModel m = query.base;
    m.n_aps = n;
    double v = CoverageEvaluator(m, 0.0).capacity_coverage(
        query.min_rate_bps_hz);
    if (!m.interference_limited() && query.check_edge) {
      v = std::min(v, CoverageEvaluator(m, m.disk.radius)
                          .capacity_coverage(query.min_rate_bps_hz));
    }
    ++evaluations;
    values.emplace(n, v);
    return v;
  }
};

}  // namespace

DesignResult required_aps(const DesignQuery& query) {
  query.base.validate();
  if (!(query.min_rate_bps_hz > 0.0) || !std::isfinite(query.min_rate_bps_hz)) {
    throw std::invalid_argument("rate target must be positive and finite");
  }
  if (!(query.min_probability > 0.0) || !(query.min_probability < 1.0)) {
    throw std::invalid_argument("probability target must lie in (0, 1)");
  }
  const int n_min = query.base.interference_limited() ? 2 : 1;
  if (query.n_max < n_min) {
    throw std::invalid_argument("n_max below the smallest admissible count");
  }

  MetricCache metric{query};
  const double target = query.min_probability;

  int best_n = n_min;
  double best_v = metric(n_min);
  DesignResult res;

  auto finish = [&](int n) {
    res.n_aps = n;
    res.achieved = metric(n);
    res.evaluations = metric.evaluations;
    return res;
  };

  if (best_v >= target) return finish(n_min);

  // Grow the bracket (lo fails, hi unknown) by doubling.  The bisection
  // below assumes the metric crosses the target once; a decrease among
  // the bracket samples disproves that, so remember it.
  bool monotone_violated = false;
  int lo = n_min;
  int hi = n_min;
  double prev_v = best_v;
  while (true) {
    hi = static_cast<int>(
        std::min<long>(2l * hi, static_cast<long>(query.n_max)));
    const double v = metric(hi);
    if (v < prev_v - 1e-12) monotone_violated = true;
    prev_v = v;
    if (v > best_v) {
      best_v = v;
      best_n = hi;
    }
    if (v >= target) break;
    if (hi >= query.n_max) {
      res.evaluations = metric.evaluations;
      throw InfeasibleError(
          "no AP count up to the ceiling meets the probability target",
          best_n, best_v);
    }
    lo = hi;
  }

  // Bisect assuming the metric crosses the target once inside (lo, hi].
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (metric(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Verify the boundary; rescan from the bottom when any sample broke
  // the single-crossing assumption (a dip can hide a smaller solution).
  const bool boundary_ok =
      metric(hi) >= target && (hi == n_min || metric(hi - 1) < target);
  if (boundary_ok && !monotone_violated) return finish(hi);

  res.used_linear_scan = true;
  for (int n = n_min; n <= hi; ++n) {
    if (metric(n) >= target) {
      DesignResult r = finish(n);
      r.used_linear_scan = true;
      return r;
    }
  }
  res.evaluations = metric.evaluations;
  throw InfeasibleError(
      "no AP count up to the ceiling meets the probability target", best_n,
      best_v);
}

std::vector<double> radial_profile(const NetworkModel& model,
                                   double threshold,
                                   std::span<const double> offsets) {
  std::vector<double> out;
  out.reserve(offsets.size());
  for (double d : offsets) {
    out.push_back(CoverageEvaluator(model, d).coverage(threshold));
  }
  return out;
}

std::vector<DensityPoint> density_sweep(const NetworkModel& base,
                                        std::span<const double> densities,
                                        double threshold, double offset) {
  std::vector<DensityPoint> out;
  out.reserve(densities.size());
  for (double lam : densities) {
    DensityPoint pt;
    pt.density_per_km2 = lam;
    pt.n_aps = ap_count_from_density(lam, base.disk);
    NetworkModel m = base;
    m.n_aps = pt.n_aps;
    pt.coverage = CoverageEvaluator(m, offset).coverage(threshold);
    out.push_back(pt);
  }
  return out;
}

std::vector<SnrPoint> snr_sweep(const NetworkModel& base,
                                std::span<const double> snr_db,
                                double threshold, double offset) {
  base.validate();
  std::vector<SnrPoint> out;
  out.reserve(snr_db.size());
  // Mean received power from one AP at the disk edge distance.
  const double edge_rx_dbm =
      base.tx_power_dbm -
      10.0 * base.path_loss_exponent * std::log10(base.disk.radius) +
      10.0 * std::log10(std::exp(0.5 * base.sigma_z_sq()));
  for (double snr : snr_db) {
    SnrPoint pt;
    pt.snr_db = snr;
    pt.noise_power_dbm = edge_rx_dbm - snr;
    NetworkModel m = base;
    m.noise_power_dbm = pt.noise_power_dbm;
    pt.coverage = CoverageEvaluator(m, offset).coverage(threshold);
    out.push_back(pt);
  }
  return out;
}

}  // namespace finitecell
