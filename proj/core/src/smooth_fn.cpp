#include "chebmel/smooth_fn.hpp"

#include <cmath>
#include <utility>

namespace chebmel {

SmoothFn::SmoothFn(JetRule jet) : jet_(std::move(jet)) {}

SmoothFn::SmoothFn(ValueRule value, JetRule jet)
    : value_(std::move(value)), jet_(std::move(jet)) {}

double SmoothFn::operator()(double t) const {
  if (value_) return value_(t);
  return jet_(Jet::variable(t, 0)).value();
}

Jet SmoothFn::operator()(const Jet& seed) const { return jet_(seed); }

Jet SmoothFn::jet_at(double t, int order) const {
  return jet_(Jet::variable(t, order));
}

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b) {
  return SmoothFn([a, b](double t) { return a(t) + b(t); },
                  [a, b](const Jet& s) { return a(s) + b(s); });
}

SmoothFn operator-(const SmoothFn& a, const SmoothFn& b) {
  return SmoothFn([a, b](double t) { return a(t) - b(t); },
                  [a, b](const Jet& s) { return a(s) - b(s); });
}

SmoothFn operator*(const SmoothFn& a, const SmoothFn& b) {
  return SmoothFn([a, b](double t) { return a(t) * b(t); },
                  [a, b](const Jet& s) { return a(s) * b(s); });
}

SmoothFn operator/(const SmoothFn& a, const SmoothFn& b) {
  return SmoothFn([a, b](double t) { return a(t) / b(t); },
                  [a, b](const Jet& s) { return a(s) / b(s); });
}

SmoothFn operator*(double c, const SmoothFn& a) {
  return SmoothFn([c, a](double t) { return c * a(t); },
                  [c, a](const Jet& s) { return c * a(s); });
}

SmoothFn operator+(const SmoothFn& a, double c) {
  return SmoothFn([c, a](double t) { return a(t) + c; },
                  [c, a](const Jet& s) { return a(s) + c; });
}

namespace fn {

SmoothFn constant(double c) {
  return SmoothFn([c](double) { return c; },
                  [c](const Jet& s) {
                    return Jet::constant(c, s.base_point(), s.order());
                  });
}

SmoothFn identity() {
  return SmoothFn([](double t) { return t; }, [](const Jet& s) { return s; });
}

SmoothFn sin(double freq) {
  return SmoothFn([freq](double t) { return std::sin(freq * t); },
                  [freq](const Jet& s) { return chebmel::sin(s * freq); });
}

SmoothFn cos(double freq) {
  return SmoothFn([freq](double t) { return std::cos(freq * t); },
                  [freq](const Jet& s) { return chebmel::cos(s * freq); });
}

SmoothFn exp() {
  return SmoothFn([](double t) { return std::exp(t); },
                  [](const Jet& s) { return chebmel::exp(s); });
}

SmoothFn monomial(int j) {
  if (j < 0) throw UsageError("monomial exponent must be nonnegative");
  if (j == 0) return constant(1.0);
  return SmoothFn([j](double t) { return std::pow(t, j); },
                  [j](const Jet& s) { return chebmel::pow(s, j); });
}

SmoothFn poly(std::vector<double> c) {
  if (c.empty()) return constant(0.0);
  return SmoothFn(
      [c](double t) {
        double r = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * t + c[i];
        return r;
      },
      [c](const Jet& s) {
        Jet r = Jet::constant(c.back(), s.base_point(), s.order());
        for (std::size_t i = c.size() - 1; i-- > 0;) r = r * s + c[i];
        return r;
      });
}

SmoothFn shifted_power(double shift, double p) {
  return SmoothFn(
      [shift, p](double t) { return std::pow(t + shift, p); },
      [shift, p](const Jet& s) { return chebmel::pow(s + shift, p); });
}

SmoothFn power_of(const SmoothFn& base, double p) {
  return SmoothFn([base, p](double t) { return std::pow(base(t), p); },
                  [base, p](const Jet& s) { return chebmel::pow(base(s), p); });
}

SmoothFn log_of(const SmoothFn& base) {
  return SmoothFn([base](double t) { return std::log(base(t)); },
                  [base](const Jet& s) { return chebmel::log(base(s)); });
}

SmoothFn linear_combination(std::vector<SmoothFn> members,
                            std::vector<double> coeffs) {
  if (members.size() != coeffs.size())
    throw UsageError("linear_combination: size mismatch");
  return SmoothFn(
      [members, coeffs](double t) {
        double r = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i)
          r += coeffs[i] * members[i](t);
        return r;
      },
      [members, coeffs](const Jet& s) {
        Jet r(s.base_point(), s.order());
        for (std::size_t i = 0; i < members.size(); ++i)
          r += coeffs[i] * members[i](s);
        return r;
      });
}

SmoothFn derivative(const SmoothFn& f) {
  return SmoothFn(
      [f](double t) { return f.jet_at(t, 1).derivative(1); },
      [f](const Jet& s) {
        const int k = s.order();
        Jet full = f.jet_at(s.value(), k + 1);
        Jet shifted(s.value(), k);
        for (int i = 0; i <= k; ++i) shifted[i] = full.derivative(i + 1);
        return compose(shifted, s);
      });
}

}  // namespace fn

BivariateFn BivariateFn::power_kernel(SmoothFn g, double alpha) {
  return BivariateFn([g, alpha](double t, const Jet& y) {
    const double gt = g(t);
    Jet base = 1.0 - y * gt;
    if (base.value() <= 0.0)
      throw DomainError("kernel base 1 - y g(t) is nonpositive at t = " +
                        std::to_string(t));
    return pow(base, -alpha);
  });
}

}  // namespace chebmel
