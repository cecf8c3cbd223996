#pragma once

// Coverage and rate statistics at a fixed evaluation point.
//
// Every quantity here is an average over the serving distance r1 of a
// conditional statistic of the matched lognormal SINR.  The evaluator
// owns that outer integral: it lays panels along the r1 axis seeded at
// the quantiles of the serving-distance law, caches the matched
// parameters per quadrature node (the expensive part at nonzero offset),
// and refines panels against the full integrand of each query.

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "finitecell/moment_matching.hpp"
#include "finitecell/quadrature.hpp"

namespace finitecell {

// Upper tail of the standard normal.
double q_function(double x);

// P[X > threshold] for lognormal X; degenerate sigma == 0 gives a step.
double conditional_coverage(double threshold, const LognormalParams& params);

class CoverageEvaluator {
 public:
  CoverageEvaluator(const NetworkModel& model, double offset);

  const NetworkModel& model() const { return model_; }
  double offset() const { return offset_; }

  // P[SINR > threshold] (linear threshold > 0).
  double coverage(double threshold) const;

  // P[n_aps * log2(1 + SINR) >= min_rate] for min_rate >= 0.
  double capacity_coverage(double min_rate_bps_hz) const;

  struct ErgodicOutcome {
    double capacity_bps_hz = 0.0;
    double upper_limit = 0.0;     // truncation point of the tail integral
    double error_estimate = 0.0;  // quadrature estimate on the outer integral
  };
  // E[n_aps * log2(1 + SINR)] via the tail integral of capacity coverage.
  ErgodicOutcome ergodic() const;

  // E over r1 of the matched mean of 10 log10 SINR.
  double mean_log_db() const;

  // Averages g(params, r1) against the serving-distance density.  g must
  // be smooth in r1 through the matched parameters.
  template <typename G>
  double integrate_profile(G&& g, double abs_tol = 1e-9,
                           double rel_tol = 1e-9) const;

 private:
  struct Node {
    double r1 = 0.0;
    double fpdf = 0.0;  // serving-distance density at r1
    LognormalParams params;
  };
  struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::array<std::uint32_t, 15> nodes{};  // Kronrod order, centre last
  };

  std::uint32_t node_index(double r1) const;
  void add_panel(double a, double b) const;

  template <typename G>
  std::pair<double, double> score_panel(const Panel& p, G&& g) const;

  NetworkModel model_;
  double offset_ = 0.0;

  // Panel refinement is shared across queries; the evaluator is not
  // thread safe.  Concurrent callers should build one evaluator each.
  mutable std::vector<Panel> panels_;
  mutable std::vector<Node> node_data_;
  mutable std::unordered_map<std::uint64_t, std::uint32_t> node_cache_;
};

// One-shot helpers; repeated queries on one scenario should reuse a
// CoverageEvaluator.
double coverage_probability(double threshold, double offset,
                            const NetworkModel& model);
double capacity_coverage(double min_rate_bps_hz, double offset,
                         const NetworkModel& model);
CoverageEvaluator::ErgodicOutcome ergodic_capacity(double offset,
                                                   const NetworkModel& model);

// ---- template bodies ----

template <typename G>
std::pair<double, double> CoverageEvaluator::score_panel(const Panel& p,
                                                         G&& g) const {
  const double h = 0.5 * (p.b - p.a);
  double kron = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 7; ++i) {
    const Node& lo = node_data_[p.nodes[2 * i]];
    const Node& hi = node_data_[p.nodes[2 * i + 1]];
    const double fs = g(lo.params, lo.r1) * lo.fpdf + g(hi.params, hi.r1) * hi.fpdf;
    kron += detail::kKronrodW[i] * fs;
    if (i % 2 == 1) gauss += detail::kGaussW[i / 2] * fs;
  }
  const Node& c = node_data_[p.nodes[14]];
  const double fc = g(c.params, c.r1) * c.fpdf;
  kron += detail::kKronrodW[7] * fc;
  gauss += detail::kGaussW[3] * fc;
  return {kron * h, std::abs(kron - gauss) * h};
}

template <typename G>
double CoverageEvaluator::integrate_profile(G&& g, double abs_tol,
                                            double rel_tol) const {
  constexpr int kMaxPanels = 800;
  std::vector<std::pair<double, double>> scored(panels_.size());
  for (std::size_t i = 0; i < panels_.size(); ++i) {
    scored[i] = score_panel(panels_[i], g);
  }
  auto totals = [&]() {
    double v = 0.0;
    double e = 0.0;
    for (const auto& s : scored) {
      v += s.first;
      e += s.second;
    }
    return std::pair<double, double>(v, e);
  };
  auto [value, error] = totals();
  while (static_cast<int>(panels_.size()) < kMaxPanels) {
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) break;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < scored.size(); ++i) {
      if (scored[i].second > scored[worst].second) worst = i;
    }
    const Panel split = panels_[worst];
    const double mid = 0.5 * (split.a + split.b);
    if (mid == split.a || mid == split.b) break;
    add_panel(split.a, mid);
    add_panel(mid, split.b);
    panels_[worst] = panels_.back();
    panels_.pop_back();
    scored[worst] = score_panel(panels_[worst], g);
    scored.push_back(score_panel(panels_.back(), g));
    std::tie(value, error) = totals();
  }
  if (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    throw QuadratureError("serving-distance average failed to converge",
                          value, error);
  }
  return value;
}

}  // namespace finitecell
