#pragma once

// Distance statistics between a fixed evaluation point and access points
// placed uniformly at random on a disk.
//
// The evaluation point sits at distance `offset` from the disk centre
// (offset = 0 recovers the rotationally symmetric special case).  All
// lengths share one unit; defaults are kilometres.

#include <span>

#include "finitecell/quadrature.hpp"

namespace finitecell {

struct Disk {
  double radius = 1.0;
};

// P[distance from the evaluation point to one uniform AP <= r].
// Piecewise: quadratic core, arc-length branch once the circle of radius
// r spills over the disk edge, saturating at r = radius + offset.
double arbitrary_ap_cdf(double r, double offset, const Disk& disk);

// Density of the same law.  The middle branch is the exact derivative of
// the arc-length branch, (2 r / (pi R^2)) * acos((offset^2 + r^2 - R^2) /
// (2 offset r)).
double arbitrary_ap_pdf(double r, double offset, const Disk& disk);

// P[min over n_aps i.i.d. distances <= r1].
double nearest_ap_cdf(double r1, int n_aps, double offset, const Disk& disk);

// Density of the nearest-AP distance: n (1 - F)^(n-1) f.
double nearest_ap_pdf(double r1, int n_aps, double offset, const Disk& disk);

// Inverse of nearest_ap_cdf in its strictly increasing region.
double nearest_ap_quantile(double prob, int n_aps, double offset,
                           const Disk& disk);

// P[one interferer distance <= rj | it exceeds r1]: the single-AP law
// renormalised to (r1, radius + offset].
double interferer_conditional_cdf(double rj, double r1, double offset,
                                  const Disk& disk);

enum class MomentMethod {
  automatic,    // closed form when offset == 0, quadrature otherwise
  closed_form,  // requires offset == 0
  quadrature,
};

// E[r^(-exponent) | r > r1] for one uniform AP, conditioned to lie
// farther than r1 from the evaluation point.  Requires exponent > 2 and
// 0 < r1 < radius + offset.
//
// The quadrature path substitutes s = r^(-exponent) and integrates the
// conditional tail CDF in s, which keeps the integrand bounded on a
// finite interval even though r^(-exponent) blows up at small r1.
double conditional_inverse_power_moment(double exponent, double r1,
                                        double offset, const Disk& disk,
                                        MomentMethod method =
                                            MomentMethod::automatic);

}  // namespace finitecell
