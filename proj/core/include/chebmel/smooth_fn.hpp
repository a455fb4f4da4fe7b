#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chebmel/jet.hpp"

namespace chebmel {

/// A scalar smooth function evaluable both as plain values and as jets.
/// The jet rule receives an arbitrary jet (typically a variable seed) and
/// must propagate it by jet arithmetic, so compositions stay exact.
class SmoothFn {
 public:
  using JetRule = std::function<Jet(const Jet&)>;
  using ValueRule = std::function<double(double)>;

  SmoothFn() = default;
  explicit SmoothFn(JetRule jet);
  SmoothFn(ValueRule value, JetRule jet);

  bool valid() const { return static_cast<bool>(jet_); }

  double operator()(double t) const;
  Jet operator()(const Jet& seed) const;
  /// Jet of this function at t up to `order`: coefficients f(t), ..., f^(order)(t).
  Jet jet_at(double t, int order) const;

 private:
  ValueRule value_;
  JetRule jet_;
};

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator-(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator*(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator/(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator*(double c, const SmoothFn& a);
SmoothFn operator+(const SmoothFn& a, double c);

namespace fn {

SmoothFn constant(double c);
SmoothFn identity();
/// sin(freq * t) and cos(freq * t).
SmoothFn sin(double freq = 1.0);
SmoothFn cos(double freq = 1.0);
SmoothFn exp();
/// t^j for integer j >= 0.
SmoothFn monomial(int j);
/// Polynomial sum c[i] t^i.
SmoothFn poly(std::vector<double> c);
/// (t + shift)^p.
SmoothFn shifted_power(double shift, double p);
/// base(t)^p for a smooth base.
SmoothFn power_of(const SmoothFn& base, double p);
SmoothFn log_of(const SmoothFn& base);
/// Sum of coeff[i] * members[i].
SmoothFn linear_combination(std::vector<SmoothFn> members, std::vector<double> coeffs);
/// d/dt of f, propagated by jets.
SmoothFn derivative(const SmoothFn& f);

}  // namespace fn

/// A function of two variables (t, y), evaluable as jets in the second
/// argument at fixed t. This is the shape every kernel G(t, y) and every
/// Melnikov first integral H(t, x) takes.
class BivariateFn {
 public:
  using JetRule = std::function<Jet(double, const Jet&)>;

  BivariateFn() = default;
  explicit BivariateFn(JetRule rule) : rule_(std::move(rule)) {}

  bool valid() const { return static_cast<bool>(rule_); }

  double operator()(double t, double y) const {
    return rule_(t, Jet::variable(y, 0)).value();
  }
  Jet jet_second(double t, const Jet& y_seed) const { return rule_(t, y_seed); }
  Jet jet_second(double t, double y, int order) const {
    return rule_(t, Jet::variable(y, order));
  }

  /// (1 - y g(t))^(-alpha).
  static BivariateFn power_kernel(SmoothFn g, double alpha);

 private:
  JetRule rule_;
};

}  // namespace chebmel
