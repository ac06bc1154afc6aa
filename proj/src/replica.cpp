#include "scadamp/replica.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "scadamp/errors.hpp"
#include "scadamp/gaussian_moments.hpp"

namespace scadamp {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887;

void check_alpha_sigma(double alpha, double sigma_y) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("replica: alpha must be positive");
  if (!(sigma_y >= 0.0) || !std::isfinite(sigma_y))
    throw std::invalid_argument("replica: sigma_y must be >= 0");
}

double curvature_gap(double qhat, const ScadParams& p) {
  return qhat - 1.0 / (p.a - 1.0);
}

// One application of the (Q, chi) map at fixed conjugates; returns false on
// curvature violation.
bool rs_map(double q, double chi, double alpha, double sigma_y,
            const ScadParams& p, double* q_new, double* chi_new) {
  double sy2 = sigma_y * sigma_y;
  double qhat = 1.0 / (1.0 + chi);
  double chihat = (q + sy2) / ((1.0 + chi) * (1.0 + chi));
  double d = curvature_gap(qhat, p);
  if (d <= 0.0) return false;
  if (chihat == 0.0) {  // noiseless degenerate start: field vanishes
    *q_new = 0.0;
    *chi_new = 0.0;
    return true;
  }
  auto th = rs_thresholds(qhat, chihat, p);
  double w1 = kSqrt2 * th[0], w2 = kSqrt2 * th[1], w3 = kSqrt2 * th[2];
  double rt = std::sqrt(chihat);

  // Q update: E_z[xstar^2], xstar piecewise linear in z.
  auto sq = [](double u0, double u1) {
    return IntervalPoly{u0 * u0, 2.0 * u0 * u1, u1 * u1};
  };
  double soft_off = p.lambda / qhat;
  double tr_off = p.a * p.lambda / (p.a - 1.0) / d;
  std::vector<double> cuts = {-w3, -w2, -w1, w1, w2, w3};
  std::vector<IntervalPoly> polys = {
      sq(0.0, rt / qhat),      // z <= -w3
      sq(tr_off, rt / d),      // (-w3, -w2]
      sq(soft_off, rt / qhat), // (-w2, -w1]
      {0, 0, 0},               // (-w1, w1]
      sq(-soft_off, rt / qhat),
      sq(-tr_off, rt / d),
      sq(0.0, rt / qhat)};
  *q_new = gaussian_piecewise_moment(cuts, polys) / alpha;

  // chi update: E_z[d xstar / d(sqrt(chihat) z)], piecewise constant.
  double e1 = std::erfc(th[0]);
  double e2 = std::erfc(th[1]);
  double e3 = std::erfc(th[2]);
  *chi_new = (((e1 - e2) + e3) / qhat + (e2 - e3) / d) / alpha;
  return true;
}

void fill_derived(RsSaddle* s, double alpha, double sigma_y,
                  const ScadParams& p) {
  double sy2 = sigma_y * sigma_y;
  s->qhat = 1.0 / (1.0 + s->chi);
  s->chihat = (s->q + sy2) / ((1.0 + s->chi) * (1.0 + s->chi));
  if (s->chihat > 0.0) {
    auto th = rs_thresholds(s->qhat, s->chihat, p);
    s->theta1 = th[0];
    s->theta2 = th[1];
    s->theta3 = th[2];
  } else {
    double inf = std::numeric_limits<double>::infinity();
    s->theta1 = s->theta2 = s->theta3 = inf;
  }
  (void)alpha;
}

}  // namespace

std::array<double, 3> rs_thresholds(double qhat, double chihat,
                                    const ScadParams& p) {
  if (!(qhat > 0.0)) throw std::invalid_argument("rs_thresholds: qhat <= 0");
  if (!(chihat > 0.0))
    throw std::invalid_argument("rs_thresholds: chihat <= 0");
  double denom = std::sqrt(2.0 * chihat);
  return {p.lambda / denom, p.lambda * (qhat + 1.0) / denom,
          p.a * p.lambda * qhat / denom};
}

double xstar(double z, double qhat, double chihat, const ScadParams& p) {
  if (!(qhat > 0.0)) throw std::invalid_argument("xstar: qhat <= 0");
  if (!(chihat >= 0.0)) throw std::invalid_argument("xstar: chihat < 0");
  double d = curvature_gap(qhat, p);
  if (d <= 0.0)
    throw DegenerateCurvatureError("xstar: qhat <= 1/(a-1), single-site "
                                   "problem has no unique maximizer");
  if (chihat == 0.0) return 0.0;
  double h = std::sqrt(chihat) * z;
  double ah = std::abs(h);
  double sg = z < 0.0 ? -1.0 : 1.0;
  if (ah <= p.lambda) return 0.0;
  if (ah <= p.lambda * (qhat + 1.0)) return (h - p.lambda * sg) / qhat;
  if (ah <= p.a * p.lambda * qhat)
    return (h - p.a * p.lambda / (p.a - 1.0) * sg) / d;
  return h / qhat;
}

RsResult rs_saddle_solve(double alpha, double sigma_y, const ScadParams& p,
                         const RsOptions& opts) {
  check_alpha_sigma(alpha, sigma_y);
  if (!(opts.damping >= 0.0 && opts.damping < 1.0))
    throw std::invalid_argument("rs_saddle_solve: damping must be in [0, 1)");
  RsResult res;
  double q = 0.0, chi = 0.0;
  for (long it = 0; it < opts.max_iter; ++it) {
    double qn, chin;
    if (!rs_map(q, chi, alpha, sigma_y, p, &qn, &chin)) {
      res.curvature_ok = false;
      break;
    }
    double resid = std::abs(qn - q) + std::abs(chin - chi);
    double dmp = opts.damping;
    q = (1.0 - dmp) * qn + dmp * q;
    chi = (1.0 - dmp) * chin + dmp * chi;
    ++res.iterations;
    if (resid < opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.saddle.q = q;
  res.saddle.chi = chi;
  fill_derived(&res.saddle, alpha, sigma_y, p);
  if (res.curvature_ok && curvature_gap(res.saddle.qhat, p) <= 0.0)
    res.curvature_ok = false;
  return res;
}

double rs_nonzero_fraction(const RsSaddle& s) { return std::erfc(s.theta1); }

AtCheck at_condition(const RsSaddle& s, double alpha, const ScadParams& p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("at_condition: alpha <= 0");
  double d = curvature_gap(s.qhat, p);
  if (d <= 0.0)
    throw DegenerateCurvatureError("at_condition: qhat <= 1/(a-1)");
  AtCheck out;
  double rho = std::erfc(s.theta1);
  out.gamma = std::erfc(s.theta2) - std::erfc(s.theta3);
  double ratio = s.qhat / d;
  out.lhs = rho / alpha + (ratio * ratio - 1.0) * out.gamma / alpha;
  out.stable = out.lhs <= 1.0;
  return out;
}

double rs_free_energy(const RsSaddle& s, double alpha, double sigma_y,
                      const ScadParams& p) {
  check_alpha_sigma(alpha, sigma_y);
  double d = curvature_gap(s.qhat, p);
  if (d <= 0.0)
    throw DegenerateCurvatureError("rs_free_energy: qhat <= 1/(a-1)");
  double sy2 = sigma_y * sigma_y;

  // xi = 2 E_z[ fxi(z) ] where fxi is minus the value of the single-site
  // maximum; piecewise quadratic in z with the same zone edges as xstar.
  double xi = 0.0;
  if (s.chihat > 0.0) {
    double w1 = kSqrt2 * s.theta1, w2 = kSqrt2 * s.theta2,
           w3 = kSqrt2 * s.theta3;
    double rt = std::sqrt(s.chihat);
    double la = p.lambda;
    // Soft zone, z > 0: -(rt z - la)^2 / (2 qhat).
    auto neg_sq_over = [](double u0, double u1, double twice_den) {
      // -(u0 + u1 z)^2 / twice_den as an IntervalPoly
      return IntervalPoly{-u0 * u0 / twice_den, -2.0 * u0 * u1 / twice_den,
                          -u1 * u1 / twice_den};
    };
    double aob = p.a * la / (p.a - 1.0);
    double cst2 = la * la / (2.0 * (p.a - 1.0));  // transition-zone constant
    double cst3 = (p.a + 1.0) * la * la / 2.0;    // identity-zone constant
    auto add_const = [](IntervalPoly poly, double c) {
      poly.c0 += c;
      return poly;
    };
    std::vector<double> cuts = {-w3, -w2, -w1, w1, w2, w3};
    std::vector<IntervalPoly> polys = {
        add_const(neg_sq_over(0.0, rt, 2.0 * s.qhat), cst3),   // z <= -w3
        add_const(neg_sq_over(aob, rt, 2.0 * d), -cst2),       // (-w3, -w2]
        neg_sq_over(la, rt, 2.0 * s.qhat),                     // (-w2, -w1]
        {0, 0, 0},                                             // (-w1, w1]
        neg_sq_over(-la, rt, 2.0 * s.qhat),                    // (w1, w2]
        add_const(neg_sq_over(-aob, rt, 2.0 * d), -cst2),      // (w2, w3]
        add_const(neg_sq_over(0.0, rt, 2.0 * s.qhat), cst3)};  // z > w3
    xi = 2.0 * gaussian_piecewise_moment(cuts, polys);
  }
  return alpha * (s.q + sy2) / (2.0 * (1.0 + s.chi)) -
         alpha * (s.q * s.qhat - s.chi * s.chihat) / 2.0 + xi / 2.0;
}

double rs_representation_error(const RsSaddle& s) { return s.chihat; }

double phase_boundary(double alpha, double sigma_y, double lambda,
                      const PhaseBoundaryOptions& opts) {
  check_alpha_sigma(alpha, sigma_y);
  if (!(opts.a_lo > 1.0) || !(opts.a_hi > opts.a_lo))
    throw std::invalid_argument("phase_boundary: need 1 < a_lo < a_hi");

  // Instability margin: positive below the boundary.  Curvature violations
  // (no valid saddle) count as unstable.
  auto margin = [&](double a) -> double {
    ScadParams pa(lambda, a);
    RsResult r = rs_saddle_solve(alpha, sigma_y, pa, opts.saddle);
    if (!r.curvature_ok) return std::numeric_limits<double>::infinity();
    if (!r.converged)
      throw NumericalError("phase_boundary: saddle iteration stalled at a = " +
                           std::to_string(a));
    return at_condition(r.saddle, alpha, pa).lhs - 1.0;
  };

  double lo = opts.a_lo, hi = opts.a_hi;
  double f_lo = margin(lo);
  while (f_lo <= 0.0) {  // already stable: push the lower end toward 1
    lo = 1.0 + (lo - 1.0) / 10.0;
    if (lo - 1.0 < 1e-9)
      throw NoSignChangeError("phase_boundary: stable down to a = 1");
    f_lo = margin(lo);
  }
  double f_hi = margin(hi);
  while (f_hi > 0.0) {  // still unstable: extend the bracket upward
    hi *= 10.0;
    if (hi > 1e9)
      throw NoSignChangeError(
          "phase_boundary: no stable phase found below a = 1e9");
    f_hi = margin(hi);
  }
  while (hi - lo > opts.tol) {
    double mid = 0.5 * (lo + hi);
    if (margin(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<RateDistortionPoint> rate_distortion_curve(
    double alpha, double sigma_y, double a, const std::vector<double>& lambdas,
    const RsOptions& opts) {
  std::vector<RateDistortionPoint> out;
  out.reserve(lambdas.size());
  for (double la : lambdas) {
    RateDistortionPoint pt;
    pt.lambda = la;
    ScadParams p(la, a);
    RsResult r = rs_saddle_solve(alpha, sigma_y, p, opts);
    pt.ok = r.converged && r.curvature_ok;
    if (pt.ok) {
      pt.nonzero_fraction = rs_nonzero_fraction(r.saddle);
      pt.rep_error = rs_representation_error(r.saddle);
      pt.at_stable = at_condition(r.saddle, alpha, p).stable;
    } else {
      pt.nonzero_fraction = std::numeric_limits<double>::quiet_NaN();
      pt.rep_error = std::numeric_limits<double>::quiet_NaN();
      pt.at_stable = false;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace scadamp
