#pragma once

#include <cmath>
#include <limits>

#include "chebmel/errors.hpp"

namespace chebmel {

/// Real interval with openness and integrable-endpoint-singularity flags.
/// Singular flags may only be set on open endpoints.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_open = true;
  bool hi_open = true;
  bool singular_lo = false;
  bool singular_hi = false;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) { validate(); }

  static Interval open(double lo, double hi) { return Interval(lo, hi); }
  static Interval closed(double lo, double hi) {
    Interval e(lo, hi);
    e.lo_open = false;
    e.hi_open = false;
    return e;
  }

  Interval with_singular_lo() const {
    Interval e = *this;
    e.singular_lo = true;
    e.validate();
    return e;
  }
  Interval with_singular_hi() const {
    Interval e = *this;
    e.singular_hi = true;
    e.validate();
    return e;
  }

  double length() const { return hi - lo; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }

  bool contains(double t) const {
    if (t < lo || t > hi) return false;
    if (t == lo && lo_open) return false;
    if (t == hi && hi_open) return false;
    return true;
  }

  void validate() const {
    if (!(lo < hi)) throw UsageError("interval requires lo < hi");
    if (singular_lo && !lo_open)
      throw UsageError("singular flag on a closed lower endpoint");
    if (singular_hi && !hi_open)
      throw UsageError("singular flag on a closed upper endpoint");
  }
};

}  // namespace chebmel
