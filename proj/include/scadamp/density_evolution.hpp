#pragma once

#include <vector>

#include "scadamp/scad_penalty.hpp"

namespace scadamp {

// Deterministic evolution of the AMP macrostate (V, E) in the large-size
// limit: the effective field decouples into R = z*sqrt(E) with z standard
// normal and effective variance s = 1 + V, and
//   V' = (1/alpha) E_z[ prox_variance(s, z sqrt(E)) ]
//   E' = (1/alpha) E_z[ prox(s, z sqrt(E))^2 ] + sigma_y^2
// Both expectations are truncated-Gaussian moments, evaluated in closed
// form; the cold start is (V, E) = (0, sigma_y^2).

struct MacroState {
  double V = 0.0;
  double E = 0.0;
};

struct DeOptions {
  double tol = 1e-10;      // |dV| + |dE| between iterations
  long max_iter = 100000;
  double damping = 0.0;    // plain iteration by default
};

MacroState de_step(const MacroState& s, double alpha, double sigma_y,
                   const ScadParams& p);

struct DeResult {
  MacroState fixed_point;
  bool converged = false;
  long iterations = 0;
  std::vector<MacroState> trajectory;  // includes the initial state
};

DeResult de_fixed_point(double alpha, double sigma_y, const ScadParams& p,
                        const DeOptions& opts = {},
                        const MacroState* init = nullptr);

// Fraction of components (out of N) escaping the zero zone at macrostate s:
// P(|z sqrt(E)| > lambda (1 + V)).
double de_nonzero_fraction(const MacroState& s, const ScadParams& p);

}  // namespace scadamp
