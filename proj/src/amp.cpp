#include "scadamp/amp.hpp"

#include <cmath>

#include "scadamp/gaussian_moments.hpp"

namespace scadamp {

AmpState amp_init(const Instance& inst) {
  AmpState st;
  st.a = Eigen::VectorXd::Zero(inst.n());
  st.nu = Eigen::VectorXd::Zero(inst.n());
  st.omega = inst.y;
  st.r = Eigen::VectorXd::Zero(inst.n());
  st.V = 0.0;
  st.s = 1.0;
  st.t = 0;
  return st;
}

AmpState amp_step(const AmpState& state, const Instance& inst,
                  const ScadParams& p, const AmpOptions& opts) {
  if (state.a.size() != inst.n() || state.omega.size() != inst.m())
    throw std::invalid_argument("amp_step: state/instance size mismatch");
  if (!(opts.damping >= 0.0 && opts.damping < 1.0))
    throw std::invalid_argument("amp_step: damping must be in [0, 1)");

  double M = static_cast<double>(inst.m());
  double V = state.nu.sum() / M;
  double s = 1.0 + V;
  if (s >= p.a - 1.0)
    throw DegenerateCurvatureError(
        "amp_step: 1 + V = " + std::to_string(s) +
        " >= a - 1; thresholding step undefined");

  AmpState next;
  next.omega =
      inst.A * state.a - (V / (V + 1.0)) * (inst.y - state.omega);
  next.r = state.a + inst.A.transpose() * (inst.y - next.omega);

  Eigen::Index n = inst.n();
  next.a.resize(n);
  next.nu.resize(n);
  double d = opts.damping;
  for (Eigen::Index i = 0; i < n; ++i) {
    next.a[i] = (1.0 - d) * prox(s, next.r[i], p) + d * state.a[i];
    next.nu[i] = (1.0 - d) * prox_variance(s, next.r[i], p) + d * state.nu[i];
  }
  next.V = next.nu.sum() / M;
  next.s = s;
  next.t = state.t + 1;
  return next;
}

AmpResult run_amp(const Instance& inst, const ScadParams& p,
                  const AmpOptions& opts,
                  const std::optional<AmpState>& warm_start) {
  AmpState st = warm_start ? *warm_start : amp_init(inst);
  AmpResult res;
  res.converged = false;
  res.iterations = 0;
  for (long it = 0; it < opts.max_iter; ++it) {
    AmpState next = amp_step(st, inst, p, opts);
    double delta = (next.a - st.a).lpNorm<Eigen::Infinity>();
    st = std::move(next);
    ++res.iterations;
    if (delta < opts.tol) {
      res.converged = true;
      break;
    }
  }
  // Report the undamped prox output at the final field: at a fixed point it
  // coincides with the trajectory variable, and it carries exact zeros.
  Eigen::VectorXd est(inst.n());
  if (st.t == 0) {
    est = st.a;
  } else {
    for (Eigen::Index i = 0; i < inst.n(); ++i)
      est[i] = prox(st.s, st.r[i], p);
  }
  res.estimate = std::move(est);
  res.energy = energy_density(res.estimate, inst, p);
  res.sparsity = sparsity_ratio(res.estimate, inst.m());
  res.rep_error = residual_mse(res.estimate, inst);
  res.state = std::move(st);
  return res;
}

double energy_density(const Eigen::VectorXd& x, const Instance& inst,
                      const ScadParams& p) {
  if (x.size() != inst.n())
    throw std::invalid_argument("energy_density: size mismatch");
  double fit = 0.5 * (inst.y - inst.A * x).squaredNorm();
  return (fit + penalty_sum(x, p)) / static_cast<double>(inst.m());
}

double sparsity_ratio(const Eigen::VectorXd& x, Eigen::Index m) {
  if (m < 1) throw std::invalid_argument("sparsity_ratio: m < 1");
  Eigen::Index nz = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) ++nz;
  return static_cast<double>(nz) / static_cast<double>(m);
}

double residual_mse(const Eigen::VectorXd& x, const Instance& inst) {
  if (x.size() != inst.n())
    throw std::invalid_argument("residual_mse: size mismatch");
  return (inst.y - inst.A * x).squaredNorm() / static_cast<double>(inst.m());
}

StabilityCheck amp_local_stability(double V, double E, double alpha,
                                   const ScadParams& p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("stability: alpha <= 0");
  if (!(E >= 0.0)) throw std::invalid_argument("stability: E < 0");
  double s = 1.0 + V;
  if (!(s > 0.0)) throw std::invalid_argument("stability: 1 + V <= 0");
  if (s >= p.a - 1.0)
    throw DegenerateCurvatureError("stability: 1 + V >= a - 1");
  if (E == 0.0) return {true, 0.0};

  double rtE = std::sqrt(E);
  double z1 = p.lambda * s / rtE;
  double z2 = p.lambda * (1.0 + s) / rtE;
  double z3 = p.a * p.lambda / rtE;
  double t1 = normal_two_sided_tail(z1);
  double t2 = normal_two_sided_tail(z2);
  double t3 = normal_two_sided_tail(z3);
  double kappa = (p.a - 1.0) / (p.a - 1.0 - s);
  double lhs = ((t1 - t2) + t3 + kappa * kappa * (t2 - t3)) / alpha;
  return {lhs <= 1.0, lhs};
}

}  // namespace scadamp
