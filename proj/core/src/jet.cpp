#include "chebmel/jet.hpp"

#include <cmath>
#include <cstdlib>

namespace chebmel {

namespace {

void require_compatible(const Jet& a, const Jet& b) {
  if (a.order() != b.order())
    throw UsageError("jet arithmetic requires equal orders");
  if (a.base_point() != b.base_point())
    throw UsageError("jet arithmetic requires equal base points");
}

bool is_integer(double p) { return p == std::floor(p) && std::abs(p) < 1e9; }

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

Jet::Jet(double base_point, int order) : base_(base_point) {
  if (order < 0) throw UsageError("jet order must be nonnegative");
  d_.assign(static_cast<std::size_t>(order) + 1, 0.0);
}

Jet Jet::constant(double value, double base_point, int order) {
  Jet j(base_point, order);
  j.d_[0] = value;
  return j;
}

Jet Jet::variable(double base_point, int order) {
  Jet j(base_point, order);
  j.d_[0] = base_point;
  if (order >= 1) j.d_[1] = 1.0;
  return j;
}

double Jet::derivative(int i) const {
  if (i < 0 || i > order()) throw UsageError("jet derivative index out of range");
  return d_[static_cast<std::size_t>(i)];
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& v : r.d_) v = -v;
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_compatible(*this, rhs);
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += rhs.d_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_compatible(*this, rhs);
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= rhs.d_[i];
  return *this;
}

Jet& Jet::operator+=(double c) {
  d_[0] += c;
  return *this;
}

Jet& Jet::operator-=(double c) {
  d_[0] -= c;
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (double& v : d_) v *= c;
  return *this;
}

Jet& Jet::operator/=(double c) {
  for (double& v : d_) v /= c;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a -= c; }
Jet operator-(double c, const Jet& a) {
  Jet r = -a;
  return r += c;
}
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a /= c; }
Jet operator/(double c, const Jet& a) {
  return Jet::constant(c, a.base_point(), a.order()) / a;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_compatible(a, b);
  const int k = a.order();
  Jet r(a.base_point(), k);
  for (int n = 0; n <= k; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += binomial(n, i) * a[i] * b[n - i];
    r[n] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  require_compatible(a, b);
  if (b.value() == 0.0)
    throw EvaluationError("jet division by a function vanishing at the base point",
                          b.base_point());
  const int k = a.order();
  Jet r(a.base_point(), k);
  for (int n = 0; n <= k; ++n) {
    double s = a[n];
    for (int i = 0; i < n; ++i) s -= binomial(n, i) * r[i] * b[n - i];
    r[n] = s / b.value();
  }
  return r;
}

Jet pow(const Jet& f, double p) {
  const int k = f.order();
  const double f0 = f.value();
  if (p == 0.0) return Jet::constant(1.0, f.base_point(), k);
  if (is_integer(p) && p > 0.0 && p <= 16.0) {
    // Repeated multiplication handles f0 == 0 exactly.
    Jet r = f;
    for (int i = 1; i < static_cast<int>(p); ++i) r = r * f;
    return r;
  }
  if (f0 == 0.0)
    throw EvaluationError("power of a function vanishing at the base point",
                          f.base_point());
  if (f0 < 0.0 && !is_integer(p))
    throw EvaluationError("fractional power of a negative base value",
                          f.base_point());
  Jet h(f.base_point(), k);
  h[0] = std::pow(f0, p);
  // Recurrence from f h' = p f' h.
  for (int n = 0; n < k; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += binomial(n, i) * f[i + 1] * h[n - i];
    s *= p;
    for (int i = 1; i <= n; ++i) s -= binomial(n, i) * f[i] * h[n + 1 - i];
    h[n + 1] = s / f0;
  }
  return h;
}

Jet exp(const Jet& f) {
  const int k = f.order();
  Jet h(f.base_point(), k);
  h[0] = std::exp(f.value());
  for (int n = 0; n < k; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += binomial(n, i) * f[i + 1] * h[n - i];
    h[n + 1] = s;
  }
  return h;
}

Jet log(const Jet& f) {
  const int k = f.order();
  if (f.value() <= 0.0)
    throw EvaluationError("log of a nonpositive base value", f.base_point());
  Jet h(f.base_point(), k);
  h[0] = std::log(f.value());
  if (k == 0) return h;
  // h' = f'/f computed as a jet of order k-1.
  Jet num(f.base_point(), k - 1), den(f.base_point(), k - 1);
  for (int i = 0; i < k; ++i) {
    num[i] = f[i + 1];
    den[i] = f[i];
  }
  Jet q = num / den;
  for (int i = 0; i < k; ++i) h[i + 1] = q[i];
  return h;
}

Jet sin(const Jet& f) {
  const int k = f.order();
  Jet s(f.base_point(), k), c(f.base_point(), k);
  s[0] = std::sin(f.value());
  c[0] = std::cos(f.value());
  for (int n = 0; n < k; ++n) {
    double ds = 0.0, dc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double b = binomial(n, i) * f[i + 1];
      ds += b * c[n - i];
      dc -= b * s[n - i];
    }
    s[n + 1] = ds;
    c[n + 1] = dc;
  }
  return s;
}

Jet cos(const Jet& f) {
  const int k = f.order();
  Jet s(f.base_point(), k), c(f.base_point(), k);
  s[0] = std::sin(f.value());
  c[0] = std::cos(f.value());
  for (int n = 0; n < k; ++n) {
    double ds = 0.0, dc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double b = binomial(n, i) * f[i + 1];
      ds += b * c[n - i];
      dc -= b * s[n - i];
    }
    s[n + 1] = ds;
    c[n + 1] = dc;
  }
  return c;
}

Jet sqrt(const Jet& f) { return pow(f, 0.5); }

Jet compose(const Jet& outer, const Jet& inner) {
  if (outer.order() != inner.order())
    throw UsageError("jet composition requires equal orders");
  const int k = inner.order();
  // Work in Taylor-coefficient form.
  std::vector<double> ft(static_cast<std::size_t>(k) + 1),
      gt(static_cast<std::size_t>(k) + 1);
  double fact = 1.0;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) fact *= i;
    ft[static_cast<std::size_t>(i)] = outer[i] / fact;
    gt[static_cast<std::size_t>(i)] = inner[i] / fact;
  }
  gt[0] = 0.0;  // expand around the inner value
  std::vector<double> r(static_cast<std::size_t>(k) + 1, 0.0);
  r[0] = ft[static_cast<std::size_t>(k)];
  std::vector<double> tmp(static_cast<std::size_t>(k) + 1, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    // r = r * gt + ft[i], truncated at order k
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int a = 0; a <= k; ++a) {
      if (r[static_cast<std::size_t>(a)] == 0.0) continue;
      for (int b = 0; a + b <= k; ++b)
        tmp[static_cast<std::size_t>(a + b)] +=
            r[static_cast<std::size_t>(a)] * gt[static_cast<std::size_t>(b)];
    }
    tmp[0] += ft[static_cast<std::size_t>(i)];
    r.swap(tmp);
  }
  Jet out(inner.base_point(), k);
  fact = 1.0;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) fact *= i;
    out[i] = r[static_cast<std::size_t>(i)] * fact;
  }
  return out;
}

}  // namespace chebmel
