#include "finitecell/coverage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "finitecell/geometry.hpp"

namespace finitecell {

double q_function(double x) {
  return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
}

double conditional_coverage(double threshold, const LognormalParams& params) {
  if (threshold <= 0.0) return 1.0;  // SINR is positive
  const double lnt = std::log(threshold);
  if (params.sigma == 0.0) {
    return lnt < params.mu ? 1.0 : 0.0;
  }
  return q_function((lnt - params.mu) / params.sigma);
}

CoverageEvaluator::CoverageEvaluator(const NetworkModel& model, double offset)
    : model_(model), offset_(offset) {
  model_.validate();
  if (!(offset >= 0.0) || !(offset <= model_.disk.radius)) {
    throw std::invalid_argument(
        "evaluation point offset must lie in [0, radius]");
  }
  if (model_.interference_limited() && model_.n_aps < 2) {
    throw std::invalid_argument(
        "an interference-limited single-AP network has unbounded SINR");
  }

  // Panel edges at serving-distance quantiles so the mass is spread
  // evenly; the density kink at radius - offset gets its own edge.
  std::vector<double> edges;
  edges.reserve(102);
  edges.push_back(0.0);
  for (int i = 1; i <= 99; ++i) {
    edges.push_back(
        nearest_ap_quantile(i / 100.0, model_.n_aps, offset_, model_.disk));
  }
  if (offset_ > 0.0 && model_.disk.radius - offset_ > 0.0) {
    edges.push_back(model_.disk.radius - offset_);
  }
  edges.push_back(model_.disk.radius + offset_);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  panels_.reserve(edges.size() + 32);
  node_data_.reserve(16 * edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] > edges[i]) add_panel(edges[i], edges[i + 1]);
  }
}

std::uint32_t CoverageEvaluator::node_index(double r1) const {
  const std::uint64_t key = std::bit_cast<std::uint64_t>(r1);
  auto it = node_cache_.find(key);
  if (it != node_cache_.end()) return it->second;
  Node n;
  n.r1 = r1;
  n.fpdf = nearest_ap_pdf(r1, model_.n_aps, offset_, model_.disk);
  if (n.fpdf > 0.0) {
    n.params = sinr_params(r1, offset_, model_);
  }
  const auto idx = static_cast<std::uint32_t>(node_data_.size());
  node_data_.push_back(n);
  node_cache_.emplace(key, idx);
  return idx;
}

void CoverageEvaluator::add_panel(double a, double b) const {
  Panel p;
  p.a = a;
  p.b = b;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * detail::kKronrodX[i];
    p.nodes[2 * i] = node_index(c - dx);
    p.nodes[2 * i + 1] = node_index(c + dx);
  }
  p.nodes[14] = node_index(c);
  panels_.push_back(p);
}

double CoverageEvaluator::coverage(double threshold) const {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw std::invalid_argument("SINR threshold must be positive and finite");
  }
  const double lnt = std::log(threshold);
  return std::clamp(
      integrate_profile([lnt](const LognormalParams& p, double) {
        if (p.sigma == 0.0) return lnt < p.mu ? 1.0 : 0.0;
        return q_function((lnt - p.mu) / p.sigma);
      }),
      0.0, 1.0);
}

double CoverageEvaluator::capacity_coverage(double min_rate_bps_hz) const {
  if (!(min_rate_bps_hz >= 0.0) || !std::isfinite(min_rate_bps_hz)) {
    throw std::invalid_argument("rate target must be non-negative and finite");
  }
  if (min_rate_bps_hz == 0.0) return 1.0;
  // Rate n log2(1 + SINR) >= C0 iff SINR > 2^(C0/n) - 1.
  const double threshold = std::exp2(min_rate_bps_hz / model_.n_aps) - 1.0;
  return coverage(threshold);
}

CoverageEvaluator::ErgodicOutcome CoverageEvaluator::ergodic() const {
  constexpr double kTailCut = 1e-6;
  double upper = 1.0;
  while (capacity_coverage(upper) >= kTailCut) {
    upper *= 2.0;
    if (upper > 1e7) {
      throw QuadratureError("rate tail never fell below the cutoff", 0.0,
                            1.0);
    }
  }
  QuadratureOptions opt;
  opt.abs_tol = 1e-7 * upper;
  opt.rel_tol = 1e-7;
  opt.max_panels = 400;
  const QuadratureResult r = integrate(
      [this](double c0) { return capacity_coverage(c0); }, 0.0, upper, opt);
  if (!r.converged) {
    throw QuadratureError("rate tail integral failed to converge", r.value,
                          r.error_estimate);
  }
  ErgodicOutcome out;
  out.capacity_bps_hz = r.value;
  out.upper_limit = upper;
  out.error_estimate = r.error_estimate;
  return out;
}

double CoverageEvaluator::mean_log_db() const {
  constexpr double kDbPerNat = 10.0 / std::numbers::ln10;
  return integrate_profile([](const LognormalParams& p, double) {
    return kDbPerNat * (p.mu + 0.5 * p.sigma * p.sigma);
  });
}

double coverage_probability(double threshold, double offset,
                            const NetworkModel& model) {
  return CoverageEvaluator(model, offset).coverage(threshold);
}

double capacity_coverage(double min_rate_bps_hz, double offset,
                         const NetworkModel& model) {
  return CoverageEvaluator(model, offset).capacity_coverage(min_rate_bps_hz);
}

CoverageEvaluator::ErgodicOutcome ergodic_capacity(double offset,
                                                   const NetworkModel& model) {
  return CoverageEvaluator(model, offset).ergodic();
}

}  // namespace finitecell
