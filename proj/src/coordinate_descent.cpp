#include "scadamp/coordinate_descent.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "scadamp/errors.hpp"
#include "scadamp/rng.hpp"

namespace scadamp {

namespace {

void check_unit_columns(const Instance& inst) {
  for (Eigen::Index j = 0; j < inst.n(); ++j) {
    double nrm2 = inst.A.col(j).squaredNorm();
    if (std::abs(nrm2 - 1.0) > 1e-8)
      throw std::invalid_argument(
          "coordinate descent requires unit-norm columns "
          "(use normalize_columns first); column " +
          std::to_string(j) + " has squared norm " + std::to_string(nrm2));
  }
}

void check_cd_params(const ScadParams& p) {
  if (p.a <= 2.0)
    throw DegenerateCurvatureError(
        "coordinate update needs a > 2 (unit effective variance)");
}

std::vector<Eigen::Index> support_of(const Eigen::VectorXd& x) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (x[j] != 0.0) idx.push_back(j);
  return idx;
}

double support_gram_min_eig(const Instance& inst,
                            const std::vector<Eigen::Index>& supp) {
  Eigen::Index k = static_cast<Eigen::Index>(supp.size());
  Eigen::MatrixXd sub(inst.m(), k);
  for (Eigen::Index c = 0; c < k; ++c) sub.col(c) = inst.A.col(supp[c]);
  Eigen::MatrixXd gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

Instance normalize_columns(const Instance& inst, Eigen::VectorXd* scales) {
  Instance out = inst;
  Eigen::VectorXd s(inst.n());
  for (Eigen::Index j = 0; j < inst.n(); ++j) {
    double nrm = inst.A.col(j).norm();
    if (!(nrm > 0.0))
      throw std::invalid_argument("normalize_columns: zero column " +
                                  std::to_string(j));
    out.A.col(j) /= nrm;
    s[j] = nrm;
  }
  if (scales) *scales = std::move(s);
  return out;
}

CdState cd_init(const Instance& inst, const Eigen::VectorXd& x0) {
  if (x0.size() != inst.n())
    throw std::invalid_argument("cd_init: x0 size mismatch");
  if (!x0.allFinite()) throw std::invalid_argument("cd_init: x0 not finite");
  CdState st;
  st.x = x0;
  st.r = inst.y - inst.A * x0;
  st.sweeps = 0;
  return st;
}

void cd_update_coordinate(CdState* st, Eigen::Index j, const Instance& inst,
                          const ScadParams& p) {
  check_cd_params(p);
  double z = inst.A.col(j).dot(st->r) + st->x[j];
  double az = std::abs(z);
  double xnew;
  if (az <= 2.0 * p.lambda) {
    xnew = soft_threshold(z, p.lambda);
  } else if (az <= p.a * p.lambda) {
    xnew = soft_threshold(z, p.a * p.lambda / (p.a - 1.0)) /
           (1.0 - 1.0 / (p.a - 1.0));
  } else {
    xnew = z;
  }
  double dx = xnew - st->x[j];
  if (dx != 0.0) {
    st->r -= dx * inst.A.col(j);
    st->x[j] = xnew;
  }
}

double cd_sweep(CdState* st, const Instance& inst, const ScadParams& p) {
  double max_dx = 0.0;
  for (Eigen::Index j = 0; j < inst.n(); ++j) {
    double old = st->x[j];
    cd_update_coordinate(st, j, inst, p);
    max_dx = std::max(max_dx, std::abs(st->x[j] - old));
  }
  ++st->sweeps;
  return max_dx;
}

CdResult run_cd(const Instance& inst, const ScadParams& p,
                const Eigen::VectorXd& x0, const CdOptions& opts) {
  check_unit_columns(inst);
  check_cd_params(p);
  CdState st = cd_init(inst, x0);
  CdResult res;
  for (long sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double max_dx = cd_sweep(&st, inst, p);
    if (sweep % 256 == 255) st.r = inst.y - inst.A * st.x;  // kill drift
    if (max_dx < opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(st.x);
  res.sweeps = st.sweeps;
  return res;
}

MultistartResult multistart_divergence(const Instance& inst,
                                       const ScadParams& p, int num_starts,
                                       std::uint64_t seed,
                                       const CdOptions& opts,
                                       double early_stop) {
  if (num_starts < 2)
    throw std::invalid_argument("multistart_divergence: need >= 2 starts");
  check_unit_columns(inst);
  MultistartResult res;
  res.total_runs = num_starts;
  std::vector<Eigen::VectorXd> fixed_points;
  fixed_points.reserve(num_starts);
  double pairs = 0.5 * num_starts * (num_starts - 1.0);
  double sum = 0.0;
  for (int k = 0; k < num_starts; ++k) {
    GaussianStream g(mix_seed(seed, static_cast<std::uint64_t>(k)));
    Eigen::VectorXd x0(inst.n());
    for (Eigen::Index i = 0; i < inst.n(); ++i) x0[i] = g.next();
    CdResult run = run_cd(inst, p, x0, opts);
    if (!run.converged) continue;
    for (const auto& other : fixed_points)
      sum += (run.x - other).squaredNorm();
    fixed_points.push_back(std::move(run.x));
    if (early_stop > 0.0 && sum / pairs > early_stop) {
      res.converged_runs = static_cast<int>(fixed_points.size());
      res.divergence = sum / pairs;  // lower bound, already above early_stop
      return res;
    }
  }
  res.converged_runs = static_cast<int>(fixed_points.size());
  if (res.converged_runs < 2) {
    res.divergence = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  double np = 0.5 * res.converged_runs * (res.converged_runs - 1.0);
  res.divergence = sum / np;
  return res;
}

double a_star(const Instance& inst, double lambda, const AStarOptions& opts) {
  if (!(opts.a_lo > 2.0) || !(opts.a_hi > opts.a_lo))
    throw std::invalid_argument("a_star: need 2 < a_lo < a_hi");
  auto unique_at = [&](double a) {
    MultistartResult r =
        multistart_divergence(inst, ScadParams(lambda, a), opts.num_starts,
                              opts.seed, opts.cd, opts.d_tol);
    if (r.converged_runs < 2)
      throw NumericalError("a_star: fewer than two converged runs at a = " +
                           std::to_string(a));
    return r.divergence < opts.d_tol;
  };
  if (unique_at(opts.a_lo)) return opts.a_lo;  // unique across the bracket
  if (!unique_at(opts.a_hi))
    throw NoSignChangeError(
        "a_star: distinct fixed points persist up to a_hi = " +
        std::to_string(opts.a_hi));
  double lo = opts.a_lo, hi = opts.a_hi;
  while (hi - lo > opts.a_tol) {
    double mid = 0.5 * (lo + hi);
    if (unique_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;  // smallest a certified unique
}

SufficientCheck sufficient_condition(const Instance& inst, double lambda,
                                     double a, double dlambda,
                                     const CdOptions& opts) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("sufficient_condition: lambda <= 0");
  check_unit_columns(inst);
  SufficientCheck out;
  double step = dlambda > 0.0 ? dlambda : lambda / 1000.0;
  ScadParams p(lambda, a);
  CdResult base =
      run_cd(inst, p, Eigen::VectorXd::Zero(inst.n()), opts);
  if (!base.converged) return out;
  std::vector<Eigen::Index> supp0 = support_of(base.x);
  out.support_before = static_cast<int>(supp0.size());

  Eigen::VectorXd warm = base.x;
  std::vector<Eigen::Index> supp;
  double la = lambda;
  bool found = false;
  for (int k = 0; k < 100000; ++k) {
    la -= step;
    if (!(la > 0.0)) break;
    CdResult probe = run_cd(inst, ScadParams(la, a), warm, opts);
    if (!probe.converged) return out;
    warm = probe.x;
    supp = support_of(probe.x);
    if (supp.size() > supp0.size()) {
      found = true;
      break;
    }
  }
  if (!found) return out;
  out.ok = true;
  out.lambda_probe = la;
  out.support_after = static_cast<int>(supp.size());
  out.c_min = support_gram_min_eig(inst, supp);
  if (out.c_min > 0.0) {
    out.threshold = 1.0 + 1.0 / out.c_min;
    out.holds = a > out.threshold;
  } else {
    out.threshold = std::numeric_limits<double>::infinity();
    out.holds = false;
  }
  return out;
}

SufficientCheck sufficient_threshold(const Instance& inst, double lambda,
                                     double a_init, int iters,
                                     const CdOptions& opts) {
  double a = a_init;
  SufficientCheck last;
  for (int i = 0; i < iters; ++i) {
    last = sufficient_condition(inst, lambda, a, 0.0, opts);
    if (!last.ok || !std::isfinite(last.threshold)) return last;
    if (std::abs(last.threshold - a) < 1e-6) break;
    a = std::max(last.threshold, 2.0 + 1e-6);
  }
  return last;
}

}  // namespace scadamp
