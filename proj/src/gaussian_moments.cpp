#include "scadamp/gaussian_moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scadamp {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kInvSqrt2 = 0.7071067811865475244008444;
}  // namespace

double normal_pdf(double z) {
  if (std::isinf(z)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_two_sided_tail(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("two_sided_tail: t < 0");
  return std::erfc(t * kInvSqrt2);
}

PartialMoments gaussian_partial_moments(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("partial_moments: lo > hi");
  // 0.5*(erfc(lo/sqrt2) - erfc(hi/sqrt2)) keeps relative accuracy in the
  // upper tail, where cdf differences cancel.
  double m0 = 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
  double plo = normal_pdf(lo);
  double phi = normal_pdf(hi);
  double m1 = plo - phi;
  double wlo = std::isinf(lo) ? 0.0 : lo * plo;
  double whi = std::isinf(hi) ? 0.0 : hi * phi;
  double m2 = m0 + wlo - whi;
  return {m0, m1, m2};
}

double gaussian_piecewise_moment(const std::vector<double>& thresholds,
                                 const std::vector<IntervalPoly>& polys) {
  if (polys.size() != thresholds.size() + 1)
    throw std::invalid_argument("piecewise_moment: need one poly per interval");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!std::isfinite(thresholds[i]))
      throw std::invalid_argument("piecewise_moment: non-finite threshold");
    if (i > 0 && !(thresholds[i - 1] < thresholds[i]))
      throw std::invalid_argument(
          "piecewise_moment: thresholds must be strictly increasing");
  }
  double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    double lo = (i == 0) ? -inf : thresholds[i - 1];
    double hi = (i == thresholds.size()) ? inf : thresholds[i];
    PartialMoments m = gaussian_partial_moments(lo, hi);
    const IntervalPoly& c = polys[i];
    total += c.c0 * m.m0 + c.c1 * m.m1 + c.c2 * m.m2;
  }
  return total;
}

double piecewise_eval(double z, const std::vector<double>& thresholds,
                      const std::vector<IntervalPoly>& polys) {
  std::size_t i = 0;
  while (i < thresholds.size() && z > thresholds[i]) ++i;
  const IntervalPoly& c = polys[i];
  return c.c0 + c.c1 * z + c.c2 * z * z;
}

}  // namespace scadamp
