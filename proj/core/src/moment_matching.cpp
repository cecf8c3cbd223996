#include "finitecell/moment_matching.hpp"

#include <cmath>
#include <stdexcept>

#include "finitecell/geometry.hpp"

namespace finitecell {

LognormalParams match_sum_to_lognormal(double m1, double m2) {
  if (!(m1 > 0.0) || !std::isfinite(m1) || !std::isfinite(m2)) {
    throw std::domain_error("moment matching needs finite m1 > 0");
  }
  // Jensen: m2 >= m1^2 for any distribution; tolerate rounding noise.
  if (m2 < m1 * m1 * (1.0 - 1e-12)) {
    throw std::domain_error("second moment below the first moment squared");
  }
  const double l1 = std::log(m1);
  const double l2 = std::log(std::max(m2, m1 * m1));
  LognormalParams p;
  p.mu = 2.0 * l1 - 0.5 * l2;
  const double s2 = std::max(l2 - 2.0 * l1, 0.0);
  p.sigma = std::sqrt(s2);
  return p;
}

InterferenceMoments interference_moments(double r1, double offset,
                                         const NetworkModel& model) {
  model.validate();
  if (model.n_aps < 2) {
    throw std::domain_error("interference needs at least 2 APs");
  }
  const double alpha = model.path_loss_exponent;
  const double p = model.tx_power_mw();
  const double sz2 = model.sigma_z_sq();
  const double n = model.n_aps;

  const double e1 =
      conditional_inverse_power_moment(alpha, r1, offset, model.disk);
  const double e2 =
      conditional_inverse_power_moment(2.0 * alpha, r1, offset, model.disk);

  InterferenceMoments m;
  // Per-AP power p*h*z*r^-alpha: E[h] = 1, E[h^2] = 2, E[z] = e^(sz2/2),
  // E[z^2] = e^(2 sz2).  Cross term pairs distinct APs once.
  m.m1 = (n - 1.0) * p * std::exp(0.5 * sz2) * e1;
  m.m2 = 2.0 * (n - 1.0) * p * p * std::exp(2.0 * sz2) * e2 +
         (n - 1.0) * (n - 2.0) * p * p * std::exp(sz2) * e1 * e1;
  return m;
}

LognormalParams numerator_params(double r1, const NetworkModel& model) {
  model.validate();
  if (!(r1 > 0.0)) {
    throw std::domain_error("serving distance must be positive");
  }
  const double p = model.tx_power_mw();
  const double sz2 = model.sigma_z_sq();
  // Exponential fading times lognormal shadowing, moment matched:
  // m1 = p e^(sz2/2) r^-a, m2 = 2 p^2 e^(2 sz2) r^-2a.
  LognormalParams out;
  out.mu = std::log(p / std::sqrt(2.0)) -
           model.path_loss_exponent * std::log(r1);
  out.sigma = std::sqrt(std::log(2.0) + sz2);
  return out;
}

LognormalParams sir_params(double r1, double offset,
                           const NetworkModel& model) {
  if (model.n_aps < 2) {
    throw std::domain_error("SIR needs at least 2 APs");
  }
  const LognormalParams num = numerator_params(r1, model);
  const InterferenceMoments im = interference_moments(r1, offset, model);
  const LognormalParams den = match_sum_to_lognormal(im.m1, im.m2);
  LognormalParams out;
  out.mu = num.mu - den.mu;
  out.sigma = std::hypot(num.sigma, den.sigma);
  return out;
}

LognormalParams sinr_params(double r1, double offset,
                            const NetworkModel& model) {
  if (model.interference_limited()) {
    if (model.n_aps < 2) {
      throw std::domain_error(
          "an interference-limited single-AP network has unbounded SINR");
    }
    return sir_params(r1, offset, model);
  }
  const double w = model.noise_power_mw();
  const LognormalParams num = numerator_params(r1, model);
  LognormalParams den;
  if (model.n_aps >= 2) {
    const InterferenceMoments im = interference_moments(r1, offset, model);
    // Noise is constant: shifts both moments of the denominator.
    den = match_sum_to_lognormal(im.m1 + w,
                                 im.m2 + 2.0 * im.m1 * w + w * w);
  } else {
    den.mu = std::log(w);
    den.sigma = 0.0;
  }
  LognormalParams out;
  out.mu = num.mu - den.mu;
  out.sigma = std::hypot(num.sigma, den.sigma);
  return out;
}

}  // namespace finitecell
