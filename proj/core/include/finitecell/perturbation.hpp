#pragma once

// Sensitivity of the average SIR to moving the evaluation point off
// centre.
//
// The headline quantity is the serving-distance average of the matched
// mean SIR in dB; its increment over the centre value is small for
// moderate offsets and is well captured by a low-order polynomial in the
// offset.  For small offsets the interference moments admit explicit
// first-order corrections, which the Taylor terms expose for validation.

#include <span>
#include <vector>

#include "finitecell/model.hpp"

namespace finitecell {

// Average over the serving distance of the matched mean SIR, in dB.
// Interference-limited scenarios only.
double sir_avg_db(double offset, const NetworkModel& model);

// sir_avg_db(offset) - sir_avg_db(0).  Valid for offsets up to half the
// disk radius.
double delta_sir_avg_db(double offset, const NetworkModel& model);

struct TaylorTerms {
  double delta_e1 = 0.0;  // first conditional moment increment
  double delta_e2 = 0.0;  // second conditional moment increment
  double delta_m1 = 0.0;  // interference mean increment
  double delta_m2 = 0.0;  // interference second moment increment
  double delta_mu = 0.0;  // matched location increment (denominator)
  double delta_sigma_sq = 0.0;
};

// Small-offset corrections to the interference moments at fixed serving
// distance r1 < radius, offset <= 0.2 * radius.
TaylorTerms taylor_correction_terms(double offset, double r1,
                                    const NetworkModel& model);

struct PolyFit {
  std::vector<double> coefficients;  // ascending powers
  double residual_rms = 0.0;
};

// Least squares polynomial fit of delta samples against offsets.
PolyFit fit_delta_poly(std::span<const double> offsets,
                       std::span<const double> deltas, int degree = 3);

}  // namespace finitecell
