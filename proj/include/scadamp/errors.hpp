#pragma once

#include <stdexcept>
#include <string>

namespace scadamp {

// Thrown when the quadratic part of the penalized single-body problem loses
// positive curvature (effective variance >= a - 1).  Callers that sweep over
// parameters are expected to treat this as a hard error, not to clamp.
class DegenerateCurvatureError : public std::domain_error {
 public:
  explicit DegenerateCurvatureError(const std::string& what)
      : std::domain_error(what) {}
};

// Thrown by bracketing searches (phase boundary, a*) when the objective has
// the same sign at both bracket ends after expansion.
class NoSignChangeError : public std::runtime_error {
 public:
  explicit NoSignChangeError(const std::string& what)
      : std::runtime_error(what) {}
};

// Generic numerical failure (non-convergence where a result is required,
// singular subproblem, ...).  The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Bad CLI flags or config file contents.  The CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scadamp
