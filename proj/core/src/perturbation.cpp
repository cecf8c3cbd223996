#include "finitecell/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "finitecell/coverage.hpp"
#include "finitecell/geometry.hpp"
#include "finitecell/quadrature.hpp"

namespace finitecell {

namespace {

void check_interference_limited(const NetworkModel& model) {
  if (!model.interference_limited()) {
    throw std::invalid_argument(
        "SIR statistics are defined for interference-limited scenarios");
  }
  if (model.n_aps < 2) {
    throw std::invalid_argument("SIR needs at least 2 APs");
  }
}

// Integral of the conditional interferer CDF, evaluated at r = s^(-1/e),
// over s in [lo, hi].
double cdf_integral(double exponent, double lo, double hi, double r1,
                    double offset, const Disk& disk) {
  if (!(hi > lo)) return 0.0;
  auto integrand = [&](double s) {
    return interferer_conditional_cdf(std::pow(s, -1.0 / exponent), r1,
                                      offset, disk);
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-15 * hi;
  opt.rel_tol = 1e-11;
  opt.max_panels = 4000;
  return integrate_or_throw(integrand, lo, hi, opt,
                            geometric_breakpoints(lo, hi));
}

}  // namespace

double sir_avg_db(double offset, const NetworkModel& model) {
  check_interference_limited(model);
  return CoverageEvaluator(model, offset).mean_log_db();
}

double delta_sir_avg_db(double offset, const NetworkModel& model) {
  check_interference_limited(model);
  if (!(offset >= 0.0) || offset > 0.5 * model.disk.radius) {
    throw std::domain_error(
        "offset increment is only supported up to half the radius");
  }
  if (offset == 0.0) return 0.0;
  return sir_avg_db(offset, model) - sir_avg_db(0.0, model);
}

TaylorTerms taylor_correction_terms(double offset, double r1,
                                    const NetworkModel& model) {
  check_interference_limited(model);
  model.validate();
  const double R = model.disk.radius;
  if (!(offset >= 0.0) || offset > 0.2 * R) {
    throw std::domain_error(
        "moment corrections are only supported up to a fifth of the radius");
  }
  if (!(r1 > 0.0) || !(r1 < R)) {
    throw std::invalid_argument("serving distance must lie in (0, radius)");
  }

  const double a = model.path_loss_exponent;
  const double d = offset;
  const double n = model.n_aps;
  const double p = model.tx_power_mw();
  const double sz2 = model.sigma_z_sq();
  const Disk& disk = model.disk;

  // Increment of E[r^-e | r > r1] when the point moves by d: boundary
  // terms of the shifted support, the CDF integral over the new strip
  // (R, R+d], and the spill correction on (R-d, R], the only part of the
  // common range where the conditional CDF changes.  The boundary power
  // difference is kept as a second-order expansion, which leaves an
  // o(d^2) error overall.
  auto spill_integral = [&](double e) {
    if (d == 0.0) return 0.0;
    const double r_lo = std::max(R - d, r1);
    auto diff = [&](double s) {
      const double r = std::pow(s, -1.0 / e);
      return interferer_conditional_cdf(r, r1, d, disk) -
             interferer_conditional_cdf(r, r1, 0.0, disk);
    };
    QuadratureOptions opt;
    opt.abs_tol = 1e-18;
    opt.rel_tol = 1e-11;
    opt.max_panels = 4000;
    return integrate_or_throw(diff, std::pow(R, -e), std::pow(r_lo, -e), opt);
  };
  auto delta_moment = [&](double e) {
    return -e * d * std::pow(R, -e - 1.0) +
           0.5 * e * (e + 1.0) * d * d * std::pow(R, -e - 2.0) +
           cdf_integral(e, std::pow(R + d, -e), std::pow(R, -e), r1, d, disk) +
           spill_integral(e);
  };

  TaylorTerms t;
  t.delta_e1 = delta_moment(a);
  t.delta_e2 = delta_moment(2.0 * a);

  // Shifted-point moment truncated at the centred support edge; pairs
  // with delta_e1 in the cross term so squares expand consistently.
  const double e1_base =
      std::pow(R, -a) + cdf_integral(a, std::pow(R, -a), std::pow(r1, -a),
                                     r1, d, disk);

  t.delta_m1 = (n - 1.0) * p * std::exp(0.5 * sz2) * t.delta_e1;
  t.delta_m2 = 2.0 * (n - 1.0) * p * p * std::exp(2.0 * sz2) * t.delta_e2 +
               (n - 1.0) * (n - 2.0) * p * p * std::exp(sz2) *
                   (t.delta_e1 * t.delta_e1 + 2.0 * e1_base * t.delta_e1);

  const double e1_0 = conditional_inverse_power_moment(a, r1, 0.0, disk);
  const double e2_0 = conditional_inverse_power_moment(2.0 * a, r1, 0.0, disk);
  const double m1_0 = (n - 1.0) * p * std::exp(0.5 * sz2) * e1_0;
  const double m2_0 = 2.0 * (n - 1.0) * p * p * std::exp(2.0 * sz2) * e2_0 +
                      (n - 1.0) * (n - 2.0) * p * p * std::exp(sz2) * e1_0 *
                          e1_0;

  t.delta_mu = 2.0 * std::log1p(t.delta_m1 / m1_0) -
               0.5 * std::log1p(t.delta_m2 / m2_0);
  t.delta_sigma_sq = std::log1p(t.delta_m2 / m2_0) -
                     2.0 * std::log1p(t.delta_m1 / m1_0);
  return t;
}

PolyFit fit_delta_poly(std::span<const double> offsets,
                       std::span<const double> deltas, int degree) {
  const std::size_t m = offsets.size();
  if (deltas.size() != m) {
    throw std::invalid_argument("offset and delta sample counts differ");
  }
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  const std::size_t cols = static_cast<std::size_t>(degree) + 1;
  if (m < cols) {
    throw std::invalid_argument("need at least degree + 1 samples");
  }

  // Householder QR on the Vandermonde matrix, column-major.
  std::vector<double> a(m * cols);
  for (std::size_t i = 0; i < m; ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      a[j * m + i] = v;
      v *= offsets[i];
    }
  }
  std::vector<double> rhs(deltas.begin(), deltas.end());

  for (std::size_t k = 0; k < cols; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm = std::hypot(norm, a[k * m + i]);
    if (norm == 0.0) {
      throw std::domain_error("degenerate polynomial fit");
    }
    if (a[k * m + k] < 0.0) norm = -norm;
    for (std::size_t i = k; i < m; ++i) a[k * m + i] /= norm;
    a[k * m + k] += 1.0;
    for (std::size_t j = k + 1; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += a[k * m + i] * a[j * m + i];
      s = -s / a[k * m + k];
      for (std::size_t i = k; i < m; ++i) a[j * m + i] += s * a[k * m + i];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += a[k * m + i] * rhs[i];
    s = -s / a[k * m + k];
    for (std::size_t i = k; i < m; ++i) rhs[i] += s * a[k * m + i];
    a[k * m + k] = -norm;  // the reflector sends the column to -norm * e_k
  }

  PolyFit fit;
  fit.coefficients.assign(cols, 0.0);
  for (std::size_t j = cols; j-- > 0;) {
    double s = rhs[j];
    for (std::size_t l = j + 1; l < cols; ++l) {
      s -= a[l * m + j] * fit.coefficients[l];
    }
    const double diag = a[j * m + j];
    if (diag == 0.0) throw std::domain_error("degenerate polynomial fit");
    fit.coefficients[j] = s / diag;
  }

  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double v = 0.0;
    for (std::size_t j = cols; j-- > 0;) v = v * offsets[i] + fit.coefficients[j];
    const double r = deltas[i] - v;
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / m);
  return fit;
}

}  // namespace finitecell
