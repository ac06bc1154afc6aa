#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scadamp {

// Deterministic CSV formatting: %.17g round-trips doubles exactly, so a
// rerun with the same config is byte-identical and parsers recover the
// exact values that were computed.
std::string fmt_double(double v);
std::string fmt_long(long v);
std::string fmt_u64(std::uint64_t v);
std::string fmt_bool(bool v);  // 0 / 1

std::string join_csv(const std::vector<std::string>& fields);

struct MeanSe {
  double mean;
  double se;  // sqrt(sample variance / n); nan when n < 2
  long n;
};

// Mean and standard error accumulated in index order (deterministic).
MeanSe mean_se(const std::vector<double>& xs);

}  // namespace scadamp
