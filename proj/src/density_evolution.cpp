#include "scadamp/density_evolution.hpp"

#include <cmath>

#include "scadamp/gaussian_moments.hpp"

namespace scadamp {

namespace {

void check_de_args(double alpha, double sigma_y) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("density evolution: alpha must be positive");
  if (!(sigma_y >= 0.0) || !std::isfinite(sigma_y))
    throw std::invalid_argument("density evolution: sigma_y must be >= 0");
}

}  // namespace

MacroState de_step(const MacroState& st, double alpha, double sigma_y,
                   const ScadParams& p) {
  check_de_args(alpha, sigma_y);
  if (!(st.E >= 0.0) || !std::isfinite(st.E) || !std::isfinite(st.V))
    throw std::invalid_argument("de_step: invalid macrostate");
  double s = 1.0 + st.V;
  if (!(s > 0.0)) throw std::invalid_argument("de_step: 1 + V <= 0");
  if (s >= p.a - 1.0)
    throw DegenerateCurvatureError("de_step: 1 + V >= a - 1");

  double sy2 = sigma_y * sigma_y;
  if (st.E == 0.0) return {0.0, sy2};  // field is identically zero

  double rtE = std::sqrt(st.E);
  double z1 = p.lambda * s / rtE;
  double z2 = p.lambda * (1.0 + s) / rtE;
  double z3 = p.a * p.lambda / rtE;
  std::vector<double> th = {-z3, -z2, -z1, z1, z2, z3};

  // prox_variance(s, z sqrt(E)) is piecewise constant in z.
  double kappa = (p.a - 1.0) / (p.a - 1.0 - s);
  double c = s * kappa;
  std::vector<IntervalPoly> var_polys = {
      {s, 0, 0}, {c, 0, 0}, {s, 0, 0}, {0, 0, 0},
      {s, 0, 0}, {c, 0, 0}, {s, 0, 0}};
  double v_new = gaussian_piecewise_moment(th, var_polys) / alpha;

  // prox(s, z sqrt(E)) is piecewise linear in z; square the per-interval
  // coefficients (slope u1, offset u0) into quadratics.
  auto sq = [](double u0, double u1) {
    return IntervalPoly{u0 * u0, 2.0 * u0 * u1, u1 * u1};
  };
  double soft_off = p.lambda * s;                          // soft zone offset
  double tr_off = kappa * s * p.a * p.lambda / (p.a - 1.0);  // transition
  std::vector<IntervalPoly> sq_polys = {
      sq(0.0, rtE),             // z <= -z3        : prox = z sqrt(E)
      sq(tr_off, kappa * rtE),  // (-z3, -z2]      : kappa(z sqrt(E) + ...)
      sq(soft_off, rtE),        // (-z2, -z1]      : z sqrt(E) + lambda s
      {0, 0, 0},                // (-z1, z1]       : 0
      sq(-soft_off, rtE),       // (z1, z2]
      sq(-tr_off, kappa * rtE), // (z2, z3]
      sq(0.0, rtE)};            // z > z3
  double e_new = gaussian_piecewise_moment(th, sq_polys) / alpha + sy2;
  return {v_new, e_new};
}

DeResult de_fixed_point(double alpha, double sigma_y, const ScadParams& p,
                        const DeOptions& opts, const MacroState* init) {
  check_de_args(alpha, sigma_y);
  if (!(opts.damping >= 0.0 && opts.damping < 1.0))
    throw std::invalid_argument("de_fixed_point: damping must be in [0, 1)");
  DeResult res;
  MacroState st = init ? *init : MacroState{0.0, sigma_y * sigma_y};
  res.trajectory.push_back(st);
  for (long it = 0; it < opts.max_iter; ++it) {
    MacroState raw = de_step(st, alpha, sigma_y, p);
    double resid = std::abs(raw.V - st.V) + std::abs(raw.E - st.E);
    double d = opts.damping;
    st = {(1.0 - d) * raw.V + d * st.V, (1.0 - d) * raw.E + d * st.E};
    res.trajectory.push_back(st);
    ++res.iterations;
    if (resid < opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.fixed_point = st;
  return res;
}

double de_nonzero_fraction(const MacroState& st, const ScadParams& p) {
  if (!(st.E >= 0.0)) throw std::invalid_argument("nonzero_fraction: E < 0");
  if (st.E == 0.0) return 0.0;
  return normal_two_sided_tail(p.lambda * (1.0 + st.V) / std::sqrt(st.E));
}

}  // namespace scadamp
