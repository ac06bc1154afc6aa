#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "scadamp/instance.hpp"
#include "scadamp/scad_penalty.hpp"

namespace scadamp {

// Cyclic coordinate descent for min_x { 1/2 ||y - A x||^2 + sum_j J(x_j) }
// with exact single-coordinate minimization.  The three-branch update is the
// exact minimizer only when column j has unit norm, so every entry point
// here requires columns normalized to 1 (see normalize_columns); it also
// needs a > 2, since the coordinate subproblem has effective variance 1.

struct CdOptions {
  double tol = 1e-8;      // max coordinate change per sweep
  long max_sweeps = 10000;
};

struct CdState {
  Eigen::VectorXd x;  // N
  Eigen::VectorXd r;  // M residual y - A x, maintained incrementally
  long sweeps = 0;
};

// A with columns rescaled to unit norm.  A solution x' of the normalized
// problem maps back to x_j = x'_j / scales_j, scales_j = ||A_j||.
Instance normalize_columns(const Instance& inst,
                           Eigen::VectorXd* scales = nullptr);

CdState cd_init(const Instance& inst, const Eigen::VectorXd& x0);

// Exact minimization over coordinate j at fixed others:
//   z = A_j . r + x_j
//   x_j <- soft(z, lambda)                          if |z| <= 2 lambda
//   x_j <- soft(z, a lambda/(a-1)) / (1 - 1/(a-1))  if 2 lambda < |z| <= a lambda
//   x_j <- z                                        if |z| > a lambda
// (identical to prox(1, z)); the residual is updated incrementally.
void cd_update_coordinate(CdState* st, Eigen::Index j, const Instance& inst,
                          const ScadParams& p);

// One cyclic pass over all coordinates; returns the max coordinate change.
double cd_sweep(CdState* st, const Instance& inst, const ScadParams& p);

struct CdResult {
  Eigen::VectorXd x;
  bool converged = false;
  long sweeps = 0;
};

CdResult run_cd(const Instance& inst, const ScadParams& p,
                const Eigen::VectorXd& x0, const CdOptions& opts = {});

struct MultistartResult {
  double divergence = 0.0;  // mean squared distance between fixed points
  int converged_runs = 0;
  int total_runs = 0;
};

// Runs CD from num_starts i.i.d. N(0,1) initializations (seeded, so the
// start set is a pure function of `seed`) and reports
//   d = 2/(m(m-1)) sum_{k<l} ||x_k - x_l||^2
// over the converged runs; non-converged runs are excluded and counted.
// If early_stop > 0, returns as soon as the partial sum (normalized by the
// full pair count) exceeds it; the result is then a lower bound on d, which
// is all a uniqueness indicator needs.
MultistartResult multistart_divergence(const Instance& inst,
                                       const ScadParams& p, int num_starts,
                                       std::uint64_t seed,
                                       const CdOptions& opts = {},
                                       double early_stop = 0.0);

struct AStarOptions {
  double a_lo = 2.05;
  double a_hi = 50.0;
  double a_tol = 0.01;   // bisection width
  double d_tol = 1e-8;   // divergence below this declares a unique fixed point
  int num_starts = 20;
  std::uint64_t seed = 0;
  CdOptions cd;
};

// Smallest a (within a_tol) at which the multistart divergence vanishes at
// fixed lambda, by bisection with a fixed start set.  Returns a_lo when the
// fixed point is already unique there; throws NoSignChangeError when even
// a_hi leaves distinct fixed points.
double a_star(const Instance& inst, double lambda, const AStarOptions& opts);

struct SufficientCheck {
  bool ok = false;       // probe runs converged and a support step was found
  bool holds = false;    // a > 1 + 1/c_min
  double c_min = 0.0;    // smallest eigenvalue of the probe-support Gram
  double threshold = 0.0;  // 1 + 1/c_min
  double lambda_probe = 0.0;
  int support_before = 0;
  int support_after = 0;
};

// Convexity-style sufficient condition for a unique CD fixed point at
// (lambda, a): decrease lambda in steps of dlambda (default lambda/1000,
// warm-started) until the support first grows, then bound via the smallest
// eigenvalue of the Gram matrix on that support.
SufficientCheck sufficient_condition(const Instance& inst, double lambda,
                                     double a, double dlambda = 0.0,
                                     const CdOptions& opts = {});

// Self-consistent sufficient threshold: iterate a <- 1 + 1/c_min(lambda, a)
// a few times from a_init (the support barely depends on a, so this settles
// immediately in practice).
SufficientCheck sufficient_threshold(const Instance& inst, double lambda,
                                     double a_init = 3.7, int iters = 2,
                                     const CdOptions& opts = {});

}  // namespace scadamp
