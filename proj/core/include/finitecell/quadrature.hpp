#pragma once

// Adaptive one dimensional quadrature on a finite interval.
//
// Each panel is scored with a 15 point Kronrod rule; the embedded 7 point
// Gauss rule supplies the error estimate.  The panel with the largest
// estimated error is split until the global estimate meets the tolerance
// or the panel budget runs out.  Callers that know where the integrand
// changes character (kinks, near-singular shoulders) can seed the panel
// list with breakpoints instead of waiting for the refinement loop to
// find them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace finitecell {

// Raised when an integral cannot be driven below the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error)
      : std::runtime_error(what), value_(value), error_(error) {}
  double value() const { return value_; }
  double error_estimate() const { return error_; }

 private:
  double value_;
  double error_;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_panels = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

// Kronrod abscissae on [-1,1]; even-index entries are the Gauss-7 points.
inline constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussW[4] = {0.129484966168870, 0.279705391489277,
                                      0.381830050505119, 0.417959183673469};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <typename F>
Panel score_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kron = kKronrodW[7] * f(c);
  double gauss = kGaussW[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodX[i];
    const double fs = f(c - dx) + f(c + dx);
    kron += kKronrodW[i] * fs;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * fs;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * h;
  p.error = std::abs((kron - gauss) * h);
  return p;
}

}  // namespace detail

// Integrates f over [a, b].  `breakpoints` inside (a, b) seed the initial
// panel edges; values outside the interval are ignored.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureOptions& opt = {},
                           std::span<const double> breakpoints = {}) {
  QuadratureResult res;
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("integration bounds must be finite");
  }
  if (a == b) {
    res.converged = true;
    return res;
  }

  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(a);
  for (double x : breakpoints) {
    if (x > std::min(a, b) && x < std::max(a, b)) edges.push_back(x);
  }
  edges.push_back(b);
  if (a < b) {
    std::sort(edges.begin(), edges.end());
  } else {
    std::sort(edges.begin(), edges.end(), std::greater<>());
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<detail::Panel> panels;
  panels.reserve(64);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.push_back(detail::score_panel(f, edges[i], edges[i + 1]));
  }

  auto totals = [&panels]() {
    double v = 0.0;
    double e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair<double, double>(v, e);
  };

  auto [value, error] = totals();
  while (static_cast<int>(panels.size()) < opt.max_panels) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    if (error <= tol) break;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const detail::Panel split = panels[worst];
    const double mid = 0.5 * (split.a + split.b);
    if (mid == split.a || mid == split.b) break;  // interval exhausted
    panels[worst] = detail::score_panel(f, split.a, mid);
    panels.push_back(detail::score_panel(f, mid, split.b));
    std::tie(value, error) = totals();
  }

  res.value = value;
  res.error_estimate = error;
  res.panels = static_cast<int>(panels.size());
  res.converged =
      error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return res;
}

// Like integrate() but raises QuadratureError when the tolerance is missed.
template <typename F>
double integrate_or_throw(F&& f, double a, double b,
                          const QuadratureOptions& opt = {},
                          std::span<const double> breakpoints = {}) {
  QuadratureResult r = integrate(std::forward<F>(f), a, b, opt, breakpoints);
  if (!r.converged) {
    throw QuadratureError("quadrature failed to converge: error estimate " +
                              std::to_string(r.error_estimate) + " after " +
                              std::to_string(r.panels) + " panels",
                          r.value, r.error_estimate);
  }
  return r.value;
}

// Geometric subdivision of [lo, hi], both positive, roughly `per_decade`
// edges per decade of dynamic range.  Used to seed integrals of fast
// power-law decays.
inline std::vector<double> geometric_breakpoints(double lo, double hi,
                                                 double per_decade = 3.0,
                                                 int max_points = 150) {
  std::vector<double> pts;
  if (!(lo > 0.0) || !(hi > lo)) return pts;
  const double decades = std::log10(hi / lo);
  int n = static_cast<int>(std::ceil(decades * per_decade));
  n = std::clamp(n, 1, max_points);
  pts.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 1; i < n; ++i) {
    pts.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
  }
  return pts;
}

}  // namespace finitecell
