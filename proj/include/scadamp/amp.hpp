#pragma once

#include <Eigen/Dense>
#include <optional>

#include "scadamp/instance.hpp"
#include "scadamp/scad_penalty.hpp"

namespace scadamp {

// Approximate message passing for min_x { 1/2 ||y - A x||^2 + sum_i J(x_i) }
// on dense i.i.d. matrices.  Per iteration, with V = (1/M) sum_i nu_i:
//   omega <- A a - V/(V+1) * (y - omega)          (Onsager-corrected output)
//   R     <- a + A^T (y - omega)                  (effective field)
//   a     <- prox(1+V, R),  nu <- prox_variance(1+V, R)   componentwise
// Damping mixes the old a and nu into the new ones; omega is never damped.

struct AmpOptions {
  double damping = 0.5;   // fraction of the previous iterate kept
  double tol = 1e-8;      // max-norm change of a between iterations
  long max_iter = 1000;
};

struct AmpState {
  Eigen::VectorXd a;      // N  current estimate (damped trajectory variable)
  Eigen::VectorXd nu;     // N  per-component variances
  Eigen::VectorXd omega;  // M  corrected output messages
  Eigen::VectorXd r;      // N  effective field of the last completed step
  double V = 0.0;         // (1/M) sum_i nu_i, kept in sync with nu
  double s = 1.0;         // 1 + V used by the last prox application
  long t = 0;             // completed iterations
};

// Cold start: a = 0, nu = 0, omega = y (first field is then R = A^T y).
AmpState amp_init(const Instance& inst);

// One full update; throws DegenerateCurvatureError if 1 + V >= a - 1.
AmpState amp_step(const AmpState& state, const Instance& inst,
                  const ScadParams& p, const AmpOptions& opts);

struct AmpResult {
  Eigen::VectorXd estimate;  // undamped prox output at the final field
  bool converged = false;
  long iterations = 0;
  double energy = 0.0;        // energy_density(estimate)
  double sparsity = 0.0;      // sparsity_ratio(estimate)
  double rep_error = 0.0;     // residual_mse(estimate)
  AmpState state;             // final state, reusable as a warm start
};

// Iterates amp_step until max_i |a_i - a_i_prev| < tol or max_iter.
// Non-convergence is reported through the flag, not thrown.
AmpResult run_amp(const Instance& inst, const ScadParams& p,
                  const AmpOptions& opts = {},
                  const std::optional<AmpState>& warm_start = std::nullopt);

// (1/M) { 1/2 ||y - A x||^2 + sum_i J(x_i) }.
double energy_density(const Eigen::VectorXd& x, const Instance& inst,
                      const ScadParams& p);

// #{ i : x_i != 0 } / M.  Exact-zero test: the zero zone of prox produces
// exact zeros, so converged estimates have a well-defined support.
double sparsity_ratio(const Eigen::VectorXd& x, Eigen::Index m);

// ||y - A x||^2 / M.
double residual_mse(const Eigen::VectorXd& x, const Instance& inst);

struct StabilityCheck {
  bool stable = false;
  double lhs = 0.0;  // growth rate of small perturbations; stable iff <= 1
};

// Local stability of the message-passing fixed point at macroscopic state
// (V, E): lhs = (1/alpha) E_z [ (d prox / d r)^2 ] evaluated at field
// z*sqrt(E) with effective variance s = 1+V.  The derivative is 1 on the
// soft/identity zones and (a-1)/(a-1-s) on the transition zone, so the
// expectation reduces to Gaussian tail masses.
StabilityCheck amp_local_stability(double V, double E, double alpha,
                                   const ScadParams& p);

}  // namespace scadamp
