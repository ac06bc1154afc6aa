#include "scadamp/experiments/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace scadamp {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_long(long v) { return std::to_string(v); }

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

std::string fmt_bool(bool v) { return v ? "1" : "0"; }

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r{std::numeric_limits<double>::quiet_NaN(),
           std::numeric_limits<double>::quiet_NaN(),
           static_cast<long>(xs.size())};
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  double var = ss / static_cast<double>(xs.size() - 1);
  r.se = std::sqrt(var / static_cast<double>(xs.size()));
  return r;
}

}  // namespace scadamp
