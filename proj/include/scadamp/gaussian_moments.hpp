#pragma once

#include <vector>

namespace scadamp {

// Closed-form integrals of piecewise-quadratic functions against the
// standard normal weight.  All the macroscopic integrals in this project
// (state evolution, stability condition, free energy) reduce to sums of
// truncated Gaussian moments because the thresholding operator is piecewise
// linear in its field.

double normal_pdf(double z);
double normal_cdf(double z);

// P(|z| > t) for standard normal z and t >= 0; accurate in the far tail.
double normal_two_sided_tail(double t);

struct PartialMoments {
  double m0;  // integral of 1   * pdf over (lo, hi]
  double m1;  // integral of z   * pdf over (lo, hi]
  double m2;  // integral of z^2 * pdf over (lo, hi]
};

// lo/hi may be +-infinity; requires lo <= hi.
PartialMoments gaussian_partial_moments(double lo, double hi);

// c0 + c1*z + c2*z^2 on one interval.
struct IntervalPoly {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

// Integral over the whole line of the piecewise function defined by strictly
// increasing finite thresholds t_1 < ... < t_k and k+1 polynomials on
// (-inf, t_1], (t_1, t_2], ..., (t_k, +inf), against the standard normal.
double gaussian_piecewise_moment(const std::vector<double>& thresholds,
                                 const std::vector<IntervalPoly>& polys);

// Pointwise evaluation with the same interval convention; for oracles.
double piecewise_eval(double z, const std::vector<double>& thresholds,
                      const std::vector<IntervalPoly>& polys);

}  // namespace scadamp
