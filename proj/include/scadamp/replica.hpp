#pragma once

#include <array>
#include <vector>

#include "scadamp/scad_penalty.hpp"

namespace scadamp {

// Replica-symmetric saddle point of the zero-temperature free energy for
// the penalized least-squares measure.  Order parameters:
//   Q   second moment of the estimate per measurement
//   chi response (susceptibility) per measurement
// with conjugates fixed by the Gaussian channel:
//   Qhat   = 1 / (1 + chi)
//   chihat = (Q + sigma_y^2) / (1 + chi)^2
// The single-site problem is max_x { sqrt(chihat) z x - Qhat x^2/2 - J(x) },
// whose maximizer xstar(z) is piecewise linear with zone edges (in |z|)
// sqrt(2)*theta1 < sqrt(2)*theta2 < sqrt(2)*theta3:
//   theta1 = lambda / sqrt(2 chihat)
//   theta2 = lambda (Qhat + 1) / sqrt(2 chihat)
//   theta3 = a lambda Qhat / sqrt(2 chihat)
// Closing the loop:
//   Q   = (1/alpha) E_z[ xstar(z)^2 ]
//   chi = (1/alpha) E_z[ d xstar / d(sqrt(chihat) z) ]
// Everything reduces to erfc masses and truncated Gaussian moments.

struct RsSaddle {
  double q = 0.0;
  double chi = 0.0;
  double qhat = 1.0;
  double chihat = 0.0;
  double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;
};

struct RsOptions {
  double tol = 1e-10;     // |dQ| + |dchi| between iterations
  long max_iter = 100000;
  double damping = 0.5;
};

struct RsResult {
  RsSaddle saddle;
  bool converged = false;
  bool curvature_ok = true;  // Qhat > 1/(a-1) held at every iterate
  long iterations = 0;
};

// Zone edges (theta1, theta2, theta3); requires chihat > 0.
std::array<double, 3> rs_thresholds(double qhat, double chihat,
                                    const ScadParams& p);

// Single-site maximizer; requires qhat > 1/(a-1) (throws
// DegenerateCurvatureError otherwise).  Identical to
// prox(1/qhat, sqrt(chihat) z / qhat).
double xstar(double z, double qhat, double chihat, const ScadParams& p);

// Damped fixed-point iteration on (Q, chi) from (0, 0).  Non-convergence
// and curvature violations are reported through flags, not thrown.
RsResult rs_saddle_solve(double alpha, double sigma_y, const ScadParams& p,
                         const RsOptions& opts = {});

// Fraction of nonzero components of the typical estimate: erfc(theta1).
double rs_nonzero_fraction(const RsSaddle& s);

struct AtCheck {
  bool stable = false;
  double lhs = 0.0;    // replicon growth factor; RS stable iff lhs <= 1
  double gamma = 0.0;  // Gaussian mass of the transition zone
};

// Local stability of the RS saddle:
//   lhs = rho/alpha + [ (Qhat/(Qhat - 1/(a-1)))^2 - 1 ] * gamma / alpha
// with rho = erfc(theta1), gamma = erfc(theta2) - erfc(theta3).  This equals
// (1/alpha) E_z[ (d xstar / dr)^2 ] with the rescaled field
// r = sqrt(chihat) z / Qhat, matching the local stability factor of the
// iterative solver under V = chi, E = Q + sigma_y^2.
AtCheck at_condition(const RsSaddle& s, double alpha, const ScadParams& p);

// Zero-temperature RS free energy density at the saddle.  Normalized so that
// the trivial all-zero phase (lambda -> infinity) gives alpha * sigma_y^2/2;
// dividing by alpha matches the per-measurement energy density of solvers.
double rs_free_energy(const RsSaddle& s, double alpha, double sigma_y,
                      const ScadParams& p);

// Typical residual ||y - A xhat||^2 / M of the RS estimate: equals chihat.
double rs_representation_error(const RsSaddle& s);

struct PhaseBoundaryOptions {
  double a_lo = 1.0 + 1e-3;
  double a_hi = 1e3;
  double tol = 1e-4;  // bisection width in a
  RsOptions saddle;
};

// Smallest a at which the RS saddle is locally stable at fixed
// (alpha, sigma_y, lambda): bisection in a on at_condition().lhs == 1.
// Curvature violations count as unstable; the upper bracket end expands
// automatically; throws NoSignChangeError if no crossing is found.
double phase_boundary(double alpha, double sigma_y, double lambda,
                      const PhaseBoundaryOptions& opts = {});

struct RateDistortionPoint {
  double lambda = 0.0;
  double nonzero_fraction = 0.0;  // rho (per N); divide by alpha for per M
  double rep_error = 0.0;         // chihat
  bool at_stable = false;
  bool ok = false;  // saddle converged with valid curvature
};

// Sweeps lambda at fixed (alpha, sigma_y, a) and reports the achievable
// (sparsity, residual) pairs with their stability flags.
std::vector<RateDistortionPoint> rate_distortion_curve(
    double alpha, double sigma_y, double a, const std::vector<double>& lambdas,
    const RsOptions& opts = {});

}  // namespace scadamp
