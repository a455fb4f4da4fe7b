#pragma once

#include <functional>
#include <vector>

#include "chebmel/interval.hpp"
#include "chebmel/jet.hpp"

namespace chebmel {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

struct JetQuadratureResult {
  Jet value;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr int kMaxSubintervals = 1 << 15;

/// Adaptive Gauss-Kronrod 15(7) over E. The tolerance is relative:
/// error_estimate <= tol * max(1, |value|) on success. Flagged singular
/// endpoints get a geometric pre-split (ratio 1/2) clustering toward the
/// endpoint, so integrable endpoint singularities need no substitution.
QuadratureResult integrate(const std::function<double(double)>& f,
                           const Interval& E, double tol = kDefaultQuadTol);

/// Same rule with a jet-valued integrand (jets in a parameter, typically y);
/// each coefficient is accumulated under the common subdivision.
JetQuadratureResult integrate_jet(const std::function<Jet(double)>& f,
                                  const Interval& E,
                                  double tol = kDefaultQuadTol);

/// Tensor-product integral over Es (d <= 4) with the error budget split
/// evenly across axes. The integrand receives the point as a coordinate
/// vector of length d.
QuadratureResult integrate_product(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Interval>& Es, double tol = kDefaultQuadTol);

}  // namespace chebmel
