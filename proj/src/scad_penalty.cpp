#include "scadamp/scad_penalty.hpp"

#include <algorithm>
#include <cmath>

namespace scadamp {

namespace {

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

void check_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("effective variance sigma2 must be positive");
}

void check_curvature(double sigma2, const ScadParams& p) {
  if (sigma2 >= p.a - 1.0)
    throw DegenerateCurvatureError(
        "effective variance " + std::to_string(sigma2) +
        " >= a - 1 = " + std::to_string(p.a - 1.0) +
        ": transition zone loses positive curvature");
}

}  // namespace

double penalty(double x, const ScadParams& p) {
  double ax = std::abs(x);
  if (ax <= p.lambda) return p.lambda * ax;
  if (ax <= p.a * p.lambda)
    return -(ax * ax - 2.0 * p.a * p.lambda * ax + p.lambda * p.lambda) /
           (2.0 * (p.a - 1.0));
  return (p.a + 1.0) * p.lambda * p.lambda / 2.0;
}

double penalty_sum(const Eigen::VectorXd& x, const ScadParams& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += penalty(x[i], p);
  return s;
}

ProxRegion classify_region(double sigma2, double r, const ScadParams& p) {
  check_sigma2(sigma2);
  double ar = std::abs(r);
  if (ar <= p.lambda * sigma2) return ProxRegion::kZero;
  if (ar <= p.lambda * (1.0 + sigma2)) return ProxRegion::kSoftThreshold;
  if (ar <= p.a * p.lambda) return ProxRegion::kTransition;
  return ProxRegion::kIdentity;
}

double prox(double sigma2, double r, const ScadParams& p) {
  check_sigma2(sigma2);
  check_curvature(sigma2, p);
  switch (classify_region(sigma2, r, p)) {
    case ProxRegion::kZero:
      return 0.0;
    case ProxRegion::kSoftThreshold:
      return r - p.lambda * sigma2 * sign(r);
    case ProxRegion::kTransition: {
      // (1/sigma2 - 1/(a-1))^{-1} * (r/sigma2 - a*lambda/(a-1) * sign r),
      // written with kappa = (a-1)/(a-1-sigma2) for stability.
      double kappa = (p.a - 1.0) / (p.a - 1.0 - sigma2);
      return kappa * (r - sigma2 * p.a * p.lambda / (p.a - 1.0) * sign(r));
    }
    case ProxRegion::kIdentity:
      return r;
  }
  return r;  // unreachable
}

double prox_variance(double sigma2, double r, const ScadParams& p) {
  check_sigma2(sigma2);
  check_curvature(sigma2, p);
  switch (classify_region(sigma2, r, p)) {
    case ProxRegion::kZero:
      return 0.0;
    case ProxRegion::kSoftThreshold:
      return sigma2;
    case ProxRegion::kTransition:
      return sigma2 * (p.a - 1.0) / (p.a - 1.0 - sigma2);
    case ProxRegion::kIdentity:
      return sigma2;
  }
  return sigma2;  // unreachable
}

double prox_objective(double x, double sigma2, double r, const ScadParams& p) {
  check_sigma2(sigma2);
  double d = x - r;
  return penalty(x, p) + d * d / (2.0 * sigma2);
}

double prox_bruteforce(double sigma2, double r, const ScadParams& p,
                       int grid_points) {
  check_sigma2(sigma2);
  if (grid_points < 3) throw std::invalid_argument("grid_points < 3");
  double half = std::abs(r) + p.a * p.lambda;
  double lo = -half, hi = half;
  double step = (hi - lo) / (grid_points - 1);

  double best_x = lo, best_f = prox_objective(lo, sigma2, r, p);
  for (int i = 1; i < grid_points; ++i) {
    double x = lo + i * step;
    double f = prox_objective(x, sigma2, r, p);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }

  // Ternary refinement inside the bracket around the best grid cell.  The
  // objective is piecewise quadratic; on a bracket of one grid cell each side
  // of the global grid minimum it is unimodal for any sane grid density.
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(best_x));
       ++it) {
    double m1 = a + (b - a) / 3.0;
    double m2 = b - (b - a) / 3.0;
    if (prox_objective(m1, sigma2, r, p) <= prox_objective(m2, sigma2, r, p))
      b = m2;
    else
      a = m1;
  }
  double mid = 0.5 * (a + b);
  // Snap to exact zero when the flat bottom of the zero zone wins.
  if (prox_objective(0.0, sigma2, r, p) <= prox_objective(mid, sigma2, r, p))
    return 0.0;
  return mid;
}

double soft_threshold(double z, double t) {
  if (std::abs(z) <= t) return 0.0;
  return z - t * sign(z);
}

}  // namespace scadamp
