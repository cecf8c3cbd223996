#pragma once

// Lognormal moment matching for the downlink signal quality.
//
// Conditioned on the serving distance, the aggregate interference is a
// sum of independent heavy-tailed terms.  Matching its first two moments
// to a lognormal gives a closed-form approximation for the SIR / SINR
// distribution: the ratio of the (lognormal-matched) desired power and
// the matched denominator is again lognormal.

#include "finitecell/model.hpp"

namespace finitecell {

struct LognormalParams {
  double mu = 0.0;     // location, natural log scale
  double sigma = 0.0;  // scale, natural log scale (>= 0)

  double mean() const { return std::exp(mu + 0.5 * sigma * sigma); }
  double second_moment() const {
    return std::exp(2.0 * mu + 2.0 * sigma * sigma);
  }
};

// Parameters of the lognormal with the given first two raw moments.
// Requires m1 > 0 and m2 >= m1^2.
LognormalParams match_sum_to_lognormal(double m1, double m2);

struct InterferenceMoments {
  double m1 = 0.0;
  double m2 = 0.0;
};

// First two moments of the total interference power given the serving
// distance r1, with the remaining n_aps - 1 APs conditioned to lie
// farther out.  The second moment carries the diagonal (per-AP power
// squared) and the pairwise cross term.
InterferenceMoments interference_moments(double r1, double offset,
                                         const NetworkModel& model);

// Lognormal fit of the desired power given the serving distance:
// transmit power times exponential fading times shadowing times r1^-alpha.
LognormalParams numerator_params(double r1, const NetworkModel& model);

// Lognormal fit of the SIR given the serving distance (interference
// only; requires n_aps >= 2).
LognormalParams sir_params(double r1, double offset,
                           const NetworkModel& model);

// Lognormal fit of the SINR given the serving distance.  Falls back to
// sir_params when no noise is modelled; with n_aps == 1 the denominator
// is the noise floor alone.
LognormalParams sinr_params(double r1, double offset,
                            const NetworkModel& model);

}  // namespace finitecell
