#pragma once

#include <vector>

#include "chebmel/errors.hpp"

namespace chebmel {

/// Truncated tower of derivative values of a smooth function at a fixed base
/// point: coeffs()[i] = f^(i)(t). Closed under arithmetic, the usual
/// transcendental maps, and composition. Binary operations require operands
/// of equal order and base point.
class Jet {
 public:
  Jet() : base_(0.0), d_(1, 0.0) {}
  Jet(double base_point, int order);

  static Jet constant(double value, double base_point, int order);
  /// The coordinate function t itself: coefficients (t, 1, 0, ...).
  static Jet variable(double base_point, int order);

  int order() const { return static_cast<int>(d_.size()) - 1; }
  double base_point() const { return base_; }
  double value() const { return d_[0]; }
  double derivative(int i) const;
  const std::vector<double>& coeffs() const { return d_; }
  double& operator[](int i) { return d_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return d_[static_cast<std::size_t>(i)]; }

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

 private:
  double base_;
  std::vector<double> d_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

Jet pow(const Jet& f, double p);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet sqrt(const Jet& f);

/// Composition F(g) where `outer` is the jet of F at base point g.value().
/// The result is a jet at g's base point.
Jet compose(const Jet& outer, const Jet& inner);

/// Binomial coefficient as a double (exact for the orders used here).
double binomial(int n, int k);

}  // namespace chebmel
