#pragma once

#include <stdexcept>
#include <string>

namespace chebmel {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed call: bad dimensions, invalid spec fields, violated preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A function could not be evaluated at a point (log of a nonpositive value,
/// fractional power of a negative value, ...). Carries the offending point.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double point)
      : Error(what + " (at point " + std::to_string(point) + ")"), point_(point) {}
  double point() const { return point_; }

 private:
  double point_;
};

/// Quadrature failed to reach the requested tolerance. Carries the worst
/// remaining subinterval.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : Error(what + " (worst subinterval [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi) {}
  double worst_lo() const { return lo_; }
  double worst_hi() const { return hi_; }

 private:
  double lo_, hi_;
};

/// Linear system numerically rank-deficient beyond tolerance.
class DegenerateSystemError : public Error {
 public:
  using Error::Error;
};

/// Kernel positivity or base-of-power violations.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Integrand denominator vanishes on the integration set.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Model-level inconsistency (first integral not constant, parameter outside
/// the period annulus, radials inconsistent with a requested case).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Least-squares membership fit residual exceeded its tolerance.
class SpanMembershipError : public Error {
 public:
  using Error::Error;
};

/// Zero scan found more candidate zeros than the resolution supports.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace chebmel
