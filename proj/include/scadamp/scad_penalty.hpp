#pragma once

#include <Eigen/Dense>

#include "scadamp/errors.hpp"

namespace scadamp {

// Parameters of the SCAD penalty.  Three zones in |x|:
//   |x| <= lambda          : lambda * |x|
//   lambda < |x| <= a*lambda : -(x^2 - 2*a*lambda*|x| + lambda^2) / (2(a-1))
//   |x| > a*lambda         : (a+1) * lambda^2 / 2
// Continuous, symmetric, constant far out (no bias on large coefficients).
struct ScadParams {
  double lambda;
  double a;

  ScadParams(double lambda_, double a_) : lambda(lambda_), a(a_) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("ScadParams: lambda must be positive");
    if (!(a > 1.0) || !std::isfinite(a))
      throw std::invalid_argument("ScadParams: a must exceed 1");
  }
};

double penalty(double x, const ScadParams& p);
double penalty_sum(const Eigen::VectorXd& x, const ScadParams& p);

// Zones of the penalized quadratic min_x { J(x) + (x - r)^2 / (2 sigma2) },
// classified by the observed field r.  Ties go to the smaller zone.
//   kZero:          |r| <= lambda * sigma2            -> minimizer 0
//   kSoftThreshold: |r| <= lambda * (1 + sigma2)      -> soft thresholding
//   kTransition:    |r| <= a * lambda                 -> reduced shrinkage
//   kIdentity:      |r| >  a * lambda                 -> passthrough
enum class ProxRegion { kZero, kSoftThreshold, kTransition, kIdentity };

ProxRegion classify_region(double sigma2, double r, const ScadParams& p);

// Minimizer of J(x) + (x - r)^2 / (2 sigma2).  Piecewise linear in r, odd,
// continuous, |prox| <= |r|.  Requires sigma2 < a - 1: beyond that the
// transition-zone quadratic loses positive curvature and the minimizer is no
// longer single-valued, so we throw instead of clamping.
double prox(double sigma2, double r, const ScadParams& p);

// sigma2 * d prox / d r: the variance transmitted through the thresholding
// step (0 in the zero zone, sigma2 in the soft/identity zones, inflated by
// the transition-zone curvature in between).
double prox_variance(double sigma2, double r, const ScadParams& p);

// The objective being minimized by prox(); exposed for tests and oracles.
double prox_objective(double x, double sigma2, double r, const ScadParams& p);

// Brute-force minimizer of prox_objective over [-(|r| + a*lambda),
// |r| + a*lambda]: dense grid scan plus ternary refinement around the best
// cell.  Deliberately independent of the closed-form zone logic; used as a
// test oracle only (O(grid_points) per call).
double prox_bruteforce(double sigma2, double r, const ScadParams& p,
                       int grid_points = 20001);

// z - t*sign(z) if |z| > t else 0.
double soft_threshold(double z, double t);

}  // namespace scadamp
