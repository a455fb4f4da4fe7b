#include "chebmel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace chebmel {

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1]; Gauss nodes are the
// odd-indexed Kronrod abscissae.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct ScalarSeg {
  double a, b;
  double val;
  double err;
  bool operator<(const ScalarSeg& o) const { return err < o.err; }
};

ScalarSeg gk15_scalar(const std::function<double(double)>& f, double a,
                      double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double f1 = f(c - h * kXgk[i]);
    const double f2 = f(c + h * kXgk[i]);
    kron += kWgk[i] * (f1 + f2);
    resabs += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  ScalarSeg s;
  s.a = a;
  s.b = b;
  s.val = kron * h;
  const double diff = std::abs(kron - gauss) * std::abs(h);
  s.err = std::max(diff, 10.0 * 1e-16 * resabs * std::abs(h));
  return s;
}

// Initial segment list: geometric clustering (ratio 1/2) toward flagged
// singular endpoints, depth chosen so the innermost sliver is negligible for
// integrable singularities at the default tolerances.
std::vector<std::pair<double, double>> initial_segments(const Interval& E) {
  if (!E.finite()) throw UsageError("integrate requires a finite interval");
  std::vector<std::pair<double, double>> segs;
  const int depth = 100;
  double lo = E.lo, hi = E.hi;
  const double len = hi - lo;
  std::vector<std::pair<double, double>> left, right;
  if (E.singular_lo) {
    const double cut = lo + len * 0.5;
    double frac = 0.5;
    double prev = cut;
    for (int j = 1; j < depth; ++j) {
      frac *= 0.5;
      const double nxt = lo + len * frac;
      left.emplace_back(nxt, prev);
      prev = nxt;
    }
    left.emplace_back(lo, prev);  // innermost sliver
    lo = cut;
  }
  if (E.singular_hi) {
    double cut = hi - (hi - lo) * 0.5;
    const double rlen = hi - cut;
    double frac = 1.0;
    double prev = cut;
    for (int j = 1; j < depth; ++j) {
      frac *= 0.5;
      const double nxt = hi - rlen * frac;
      right.emplace_back(prev, nxt);
      prev = nxt;
    }
    right.emplace_back(prev, hi);
    hi = cut;
  }
  for (auto& s : left) segs.push_back(s);
  if (lo < hi) segs.emplace_back(lo, hi);
  for (auto& s : right) segs.push_back(s);
  return segs;
}

bool splittable(double a, double b) {
  const double mid = 0.5 * (a + b);
  return mid > a && mid < b;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           const Interval& E, double tol) {
  if (tol <= 0.0) throw UsageError("integrate requires a positive tolerance");
  const auto init = initial_segments(E);

  std::priority_queue<ScalarSeg> queue;
  double total = 0.0, total_err = 0.0, stuck_err = 0.0;
  int count = 0;
  for (auto [a, b] : init) {
    ScalarSeg s = gk15_scalar(f, a, b);
    total += s.val;
    total_err += s.err;
    ++count;
    queue.push(s);
  }

  auto converged = [&]() {
    return total_err + stuck_err <= tol * std::max(1.0, std::abs(total));
  };

  while (!converged() && !queue.empty() && count < kMaxSubintervals) {
    ScalarSeg worst = queue.top();
    queue.pop();
    if (!splittable(worst.a, worst.b)) {
      total_err -= worst.err;
      stuck_err += worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    ScalarSeg l = gk15_scalar(f, worst.a, mid);
    ScalarSeg r = gk15_scalar(f, mid, worst.b);
    total += l.val + r.val - worst.val;
    total_err += l.err + r.err - worst.err;
    ++count;
    queue.push(l);
    queue.push(r);
  }

  if (!converged()) {
    double wa = E.lo, wb = E.hi;
    if (!queue.empty()) {
      wa = queue.top().a;
      wb = queue.top().b;
    }
    throw ConvergenceError("integrate: tolerance not reached", wa, wb);
  }

  QuadratureResult out;
  out.value = total;
  out.error_estimate = total_err + stuck_err;
  out.subdivisions = count;
  return out;
}

JetQuadratureResult integrate_jet(const std::function<Jet(double)>& f,
                                  const Interval& E, double tol) {
  if (tol <= 0.0) throw UsageError("integrate requires a positive tolerance");
  const auto init = initial_segments(E);

  struct JetSeg {
    double a, b;
    Jet val;
    double err;
    bool operator<(const JetSeg& o) const { return err < o.err; }
  };

  auto gk15 = [&f](double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Jet fc = f(c);
    const int order = fc.order();
    Jet kron = fc * kWgk[7];
    Jet gauss = fc * kWg[3];
    for (int i = 0; i < 7; ++i) {
      Jet f1 = f(c - h * kXgk[i]);
      Jet f2 = f(c + h * kXgk[i]);
      kron += kWgk[i] * (f1 + f2);
      if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
    }
    JetSeg s{a, b, kron * h, 0.0};
    double diff = 0.0;
    for (int i = 0; i <= order; ++i)
      diff = std::max(diff, std::abs(kron[i] - gauss[i]));
    s.err = std::max(diff * std::abs(h), 10.0 * 1e-16 * std::abs(s.val[0]));
    return s;
  };

  std::priority_queue<JetSeg> queue;
  bool first = true;
  Jet total;
  double total_err = 0.0, stuck_err = 0.0;
  int count = 0;
  for (auto [a, b] : init) {
    JetSeg s = gk15(a, b);
    if (first) {
      total = s.val;
      first = false;
    } else {
      total += s.val;
    }
    total_err += s.err;
    ++count;
    queue.push(s);
  }

  auto scale = [&]() {
    double m = 0.0;
    for (int i = 0; i <= total.order(); ++i) m = std::max(m, std::abs(total[i]));
    return std::max(1.0, m);
  };
  auto converged = [&]() { return total_err + stuck_err <= tol * scale(); };

  while (!converged() && !queue.empty() && count < kMaxSubintervals) {
    JetSeg worst = queue.top();
    queue.pop();
    if (!splittable(worst.a, worst.b)) {
      total_err -= worst.err;
      stuck_err += worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    JetSeg l = gk15(worst.a, mid);
    JetSeg r = gk15(mid, worst.b);
    total += l.val;
    total += r.val;
    total -= worst.val;
    total_err += l.err + r.err - worst.err;
    ++count;
    queue.push(l);
    queue.push(r);
  }

  if (!converged()) {
    double wa = E.lo, wb = E.hi;
    if (!queue.empty()) {
      wa = queue.top().a;
      wb = queue.top().b;
    }
    throw ConvergenceError("integrate_jet: tolerance not reached", wa, wb);
  }

  JetQuadratureResult out;
  out.value = total;
  out.error_estimate = total_err + stuck_err;
  out.subdivisions = count;
  return out;
}

namespace {

struct ProductState {
  const std::function<double(const std::vector<double>&)>* f;
  const std::vector<Interval>* domains;
  std::vector<double> point;
  double axis_tol;
  int subdivisions = 0;
};

double product_recurse(ProductState& st, std::size_t axis) {
  const std::size_t d = st.domains->size();
  if (axis + 1 == d) {
    QuadratureResult r = integrate(
        [&st, axis](double t) {
          st.point[axis] = t;
          return (*st.f)(st.point);
        },
        (*st.domains)[axis], st.axis_tol);
    st.subdivisions += r.subdivisions;
    return r.value;
  }
  QuadratureResult r = integrate(
      [&st, axis](double t) {
        st.point[axis] = t;
        return product_recurse(st, axis + 1);
      },
      (*st.domains)[axis], st.axis_tol);
  st.subdivisions += r.subdivisions;
  return r.value;
}

}  // namespace

QuadratureResult integrate_product(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Interval>& Es, double tol) {
  if (Es.empty()) throw UsageError("integrate_product requires >= 1 axis");
  if (Es.size() > 4) throw UsageError("integrate_product supports d <= 4");
  if (Es.size() == 1)
    return integrate([&f](double t) { return f(std::vector<double>{t}); },
                     Es[0], tol);

  ProductState st;
  st.f = &f;
  st.domains = &Es;
  st.point.assign(Es.size(), 0.0);
  st.axis_tol = tol / (2.0 * static_cast<double>(Es.size()));

  QuadratureResult outer = integrate(
      [&st](double t) {
        st.point[0] = t;
        return product_recurse(st, 1);
      },
      Es[0], tol / 2.0);
  outer.subdivisions += st.subdivisions;
  return outer;
}

}  // namespace chebmel
