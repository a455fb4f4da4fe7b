#include "chebmel/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "chebmel/matrix.hpp"
#include "chebmel/parallel.hpp"
#include "chebmel/quadrature.hpp"

namespace chebmel {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRadialTol = 1e-9;

double powi(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

void MelnikovEquationSpec::validate() const {
  if (!H.valid()) throw UsageError("melnikov spec: H missing");
  if (!unperturbed) throw UsageError("melnikov spec: unperturbed solution missing");
  if (sector_bounds.size() < 2)
    throw UsageError("melnikov spec: need at least one sector");
  if (std::abs(sector_bounds.front() + kPi) > 1e-12 ||
      std::abs(sector_bounds.back() - kPi) > 1e-12)
    throw UsageError("melnikov spec: sector bounds must span [-pi, pi]");
  for (std::size_t i = 0; i + 1 < sector_bounds.size(); ++i)
    if (!(sector_bounds[i] < sector_bounds[i + 1]))
      throw UsageError("melnikov spec: sector bounds must increase");
  if (sector_terms.size() + 1 != sector_bounds.size())
    throw UsageError("melnikov spec: one term per sector required");
}

double m1_general(const MelnikovEquationSpec& spec, double rho, double tol) {
  spec.validate();

  // Sampled first-integral check: H stays constant along the unperturbed
  // solution.
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = -h_min;
  for (int i = 0; i < 32; ++i) {
    const double t = -kPi + 2.0 * kPi * (i + 0.5) / 32.0;
    const double h = spec.H(t, spec.unperturbed(t, rho));
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);
  }
  if (h_max - h_min > 1e-8 * std::max(1.0, std::abs(h_max)))
    throw ModelError("m1_general: H is not constant along the unperturbed solution");

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < spec.sector_bounds.size(); ++i) {
    const auto& L = spec.sector_terms[i];
    auto integrand = [&spec, &L, rho](double t) {
      const double x = spec.unperturbed(t, rho);
      const double hx = spec.H.jet_second(t, x, 1).derivative(1);
      return hx * L(t, x);
    };
    total += integrate(integrand,
                       Interval(spec.sector_bounds[i], spec.sector_bounds[i + 1]),
                       tol)
                 .value;
  }
  return total;
}

void System9Model::validate() const {
  if (m < 1) throw UsageError("system 9 requires m >= 1");
  if (static_cast<int>(lambda_hat.size()) != m + 1)
    throw UsageError("system 9 requires m + 1 reduced coefficients");
}

namespace {

Jet system9_integrand_jet(const System9Model& model, const Jet& rho,
                          double th) {
  const int e = 2 * model.m - 1;
  Jet y = pow(rho, static_cast<double>(e));
  double num = 0.0;
  for (std::size_t k = 0; k < model.lambda_hat.size(); ++k)
    num += model.lambda_hat[k] * std::cos(2.0 * static_cast<double>(k) * th);
  const double s = std::sin(th);
  return y * (num * s * s) / (1.0 - y * std::cos(th));
}

}  // namespace

double m1_system9(const System9Model& model, double rho, System9Path path,
                  double tol) {
  model.validate();
  if (!(rho > 0.0 && rho < 1.0))
    throw ModelError("system 9: rho must lie in (0, 1)");
  const int e = 2 * model.m - 1;
  const double y = powi(rho, e);

  if (path == System9Path::direct) {
    auto integrand = [&model, y](double th) {
      double num = 0.0;
      for (std::size_t k = 0; k < model.lambda_hat.size(); ++k)
        num += model.lambda_hat[k] * std::cos(2.0 * static_cast<double>(k) * th);
      const double s = std::sin(th);
      return num * s * s / (1.0 - y * std::cos(th));
    };
    return y * integrate(integrand, Interval(-kPi, kPi), tol).value;
  }

  const SmoothFn xi = fn::sin(1.0) * fn::sin(1.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < model.lambda_hat.size(); ++k) {
    if (model.lambda_hat[k] == 0.0) continue;
    TrigIntegralSpec spec{Interval(0.0, kPi), 2 * static_cast<int>(k), 1.0, 1,
                          xi};
    sum += model.lambda_hat[k] * cs_trig(spec, y, TrigPart::cosine, tol);
  }
  return 2.0 * y * sum;
}

SmoothFn m1_system9_fn(const System9Model& model, System9Path path,
                       double tol) {
  model.validate();
  if (path == System9Path::direct) {
    return SmoothFn(
        [model, tol](double rho) {
          return m1_system9(model, rho, System9Path::direct, tol);
        },
        [model, tol](const Jet& seed) {
          return integrate_jet(
                     [&model, &seed](double th) {
                       return system9_integrand_jet(model, seed, th);
                     },
                     Interval(-kPi, kPi), tol)
              .value;
        });
  }
  const SmoothFn xi = fn::sin(1.0) * fn::sin(1.0);
  return SmoothFn(
      [model, tol](double rho) {
        return m1_system9(model, rho, System9Path::reduced, tol);
      },
      [model, xi, tol](const Jet& seed) {
        const int e = 2 * model.m - 1;
        Jet yj = pow(seed, static_cast<double>(e));
        Jet sum(seed.base_point(), seed.order());
        for (std::size_t k = 0; k < model.lambda_hat.size(); ++k) {
          if (model.lambda_hat[k] == 0.0) continue;
          TrigIntegralSpec spec{Interval(0.0, kPi), 2 * static_cast<int>(k),
                                1.0, 1, xi};
          Jet at = cs_trig_jet(spec, yj.value(), seed.order(),
                               TrigPart::cosine, tol);
          sum += model.lambda_hat[k] * compose(at, yj);
        }
        return 2.0 * yj * sum;
      });
}

int BivariatePoly::degree() const {
  int deg = -1;
  for (std::size_t i = 0; i < coef.size(); ++i)
    for (std::size_t j = 0; j < coef[i].size(); ++j)
      if (coef[i][j] != 0.0)
        deg = std::max(deg, static_cast<int>(i + j));
  return deg;
}

double BivariatePoly::eval(double x, double y) const {
  double total = 0.0;
  double xp = 1.0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    double yp = 1.0;
    for (std::size_t j = 0; j < coef[i].size(); ++j) {
      if (coef[i][j] != 0.0) total += coef[i][j] * xp * yp;
      yp *= y;
    }
    xp *= x;
  }
  return total;
}

Jet BivariatePoly::eval(const Jet& x, const Jet& y) const {
  Jet total(x.base_point(), x.order());
  Jet xp = Jet::constant(1.0, x.base_point(), x.order());
  for (std::size_t i = 0; i < coef.size(); ++i) {
    Jet yp = Jet::constant(1.0, y.base_point(), y.order());
    for (std::size_t j = 0; j < coef[i].size(); ++j) {
      if (coef[i][j] != 0.0) total += coef[i][j] * (xp * yp);
      yp = yp * y;
    }
    xp = xp * x;
  }
  return total;
}

bool BivariatePoly::is_zero() const { return degree() < 0; }

void System11Model::validate() const {
  if (a.empty() && b.empty())
    throw UsageError("system 11 requires at least one singular line");
  for (double v : a)
    if (v == 0.0) throw UsageError("system 11: a_i must be nonzero");
  for (double v : b)
    if (v == 0.0) throw UsageError("system 11: b_j must be nonzero");
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] == a[j]) throw UsageError("system 11: a_i must be distinct");
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (b[i] == b[j]) throw UsageError("system 11: b_j must be distinct");
  if (m < 1) throw UsageError("system 11 requires degree m >= 1");
  if (P.degree() > m || Q.degree() > m)
    throw UsageError("system 11: perturbation degree exceeds m");
}

double System11Model::rho_max() const {
  double r = std::numeric_limits<double>::infinity();
  for (double v : a) r = std::min(r, std::abs(v));
  for (double v : b) r = std::min(r, std::abs(v));
  return r;
}

double m1_system11(const System11Model& model, double rho, double tol) {
  model.validate();
  if (!(rho > 0.0 && rho < model.rho_max()))
    throw ModelError("system 11: rho outside the period annulus");
  auto integrand = [&model, rho](double th) {
    const double x = rho * std::cos(th), y = rho * std::sin(th);
    double den = 1.0;
    for (double ai : model.a) den *= x - ai;
    for (double bj : model.b) den *= y - bj;
    return (model.P.eval(x, y) * std::cos(th) +
            model.Q.eval(x, y) * std::sin(th)) /
           den;
  };
  return integrate(integrand, Interval(-kPi, kPi), tol).value;
}

SmoothFn m1_system11_fn(const System11Model& model, double tol) {
  model.validate();
  return SmoothFn(
      [model, tol](double rho) { return m1_system11(model, rho, tol); },
      [model, tol](const Jet& seed) {
        return integrate_jet(
                   [&model, &seed](double th) {
                     Jet x = seed * std::cos(th);
                     Jet y = seed * std::sin(th);
                     Jet den = Jet::constant(1.0, seed.base_point(),
                                             seed.order());
                     for (double ai : model.a) den = den * (x - ai);
                     for (double bj : model.b) den = den * (y - bj);
                     return (model.P.eval(x, y) * std::cos(th) +
                             model.Q.eval(x, y) * std::sin(th)) /
                            den;
                   },
                   Interval(-kPi, kPi), tol)
            .value;
      });
}

namespace {

std::vector<double> dedup_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > 1e-12 * std::max(1.0, std::abs(x)))
      out.push_back(x);
  return out;
}

}  // namespace

int bound_system11(const System11Model& model) {
  model.validate();
  std::vector<double> radii;
  for (double v : model.a) radii.push_back(std::abs(v));
  for (double v : model.b) radii.push_back(std::abs(v));
  const int card_a = static_cast<int>(dedup_sorted(radii).size());

  std::vector<double> dists;
  for (double ai : model.a)
    for (double bj : model.b) dists.push_back(ai * ai + bj * bj);
  const int l = static_cast<int>(dedup_sorted(dists).size());

  const int m = model.m;
  return card_a * (m / 2 + l + 1) + (m - 1) / 2 + l;
}

int coarse_bound_system11(const System11Model& model) {
  model.validate();
  const int n1 = static_cast<int>(model.a.size());
  const int n2 = static_cast<int>(model.b.size());
  const int m = model.m;
  return (n1 + n2) * (m / 2 + n1 * n2 + 1) + (m - 1) / 2 + n1 * n2;
}

std::vector<std::pair<int, int>> b1_indices(int m) {
  if (m < 1) throw UsageError("b1_indices requires m >= 1");
  std::vector<std::pair<int, int>> out;
  for (int p = 1; p <= (m + 1) / 2; ++p) out.emplace_back(0, p);
  for (int i = 1; i <= m + 1; ++i)
    for (int p = 0; p <= (m - i + 1) / 2; ++p) out.emplace_back(i, p);
  return out;
}

std::vector<std::pair<int, int>> b2_indices(int m) {
  if (m < 1) throw UsageError("b2_indices requires m >= 1");
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= m; ++i)
    for (int p = 0; p <= (m - i) / 2; ++p) out.emplace_back(i, p);
  return out;
}

void PiecewiseRadialModel::validate() const {
  if (m < 1) throw UsageError("piecewise radial model requires m >= 1");
  if (a == 0.0) throw UsageError("piecewise radial model requires a != 0");
  if (radials.size() < 2)
    throw UsageError("piecewise radial model requires n >= 1 radials");
  for (double th : radials)
    if (th < -kPi || th >= kPi)
      throw UsageError("radials must lie in [-pi, pi)");
  for (std::size_t i = 0; i + 1 < radials.size(); ++i)
    if (!(radials[i] < radials[i + 1]))
      throw UsageError("radials must be strictly increasing");
  if (mu.size() != radials.size())
    throw UsageError("one coefficient block per sector required");
  const auto n1 = b1_indices(m).size(), n2 = b2_indices(m).size();
  for (const auto& sc : mu)
    if (sc.c.size() != n1 || sc.d.size() != n2)
      throw UsageError("sector coefficient blocks must match B1/B2 sizes");
}

double PiecewiseRadialModel::rho_max() const { return 1.0 / std::abs(a); }

std::vector<std::vector<Interval>> sector_pieces(
    const std::vector<double>& radials) {
  std::vector<std::vector<Interval>> out;
  const std::size_t n = radials.size();
  for (std::size_t s = 0; s + 1 < n; ++s)
    out.push_back({Interval(radials[s], radials[s + 1])});
  std::vector<Interval> wrap;
  if (radials.back() < kPi) wrap.push_back(Interval(radials.back(), kPi));
  if (radials.front() > -kPi) wrap.push_back(Interval(-kPi, radials.front()));
  out.push_back(std::move(wrap));
  return out;
}

namespace {

double sector_cos_integral(const std::vector<Interval>& pieces, int i,
                           double a, double rho, double tol) {
  double total = 0.0;
  for (const auto& e : pieces) {
    total += integrate(
                 [i, a, rho](double th) {
                   const double c = std::cos(th);
                   double v = 1.0;
                   for (int q = 0; q < i; ++q) v *= c;
                   return v / (1.0 - a * rho * c);
                 },
                 e, tol)
                 .value;
  }
  return total;
}

double sector_sin_integral(const std::vector<Interval>& pieces, int i,
                           double a, double rho, double tol) {
  double total = 0.0;
  for (const auto& e : pieces) {
    total += integrate(
                 [i, a, rho](double th) {
                   const double c = std::cos(th);
                   double v = std::sin(th);
                   for (int q = 0; q < i; ++q) v *= c;
                   return v / (1.0 - a * rho * c);
                 },
                 e, tol)
                 .value;
  }
  return total;
}

}  // namespace

double m1_system10(const PiecewiseRadialModel& model, double rho, double tol) {
  model.validate();
  if (!(rho > 0.0 && rho < model.rho_max()))
    throw ModelError("system 10: rho outside the period annulus");
  const auto pieces = sector_pieces(model.radials);
  const auto B1 = b1_indices(model.m);
  const auto B2 = b2_indices(model.m);

  double total = 0.0;
  for (std::size_t s = 0; s < pieces.size(); ++s) {
    const auto& sc = model.mu[s];
    std::vector<char> needC(static_cast<std::size_t>(model.m) + 2, 0);
    std::vector<char> needS(static_cast<std::size_t>(model.m) + 1, 0);
    for (std::size_t idx = 0; idx < B1.size(); ++idx)
      if (sc.c[idx] != 0.0) needC[static_cast<std::size_t>(B1[idx].first)] = 1;
    for (std::size_t idx = 0; idx < B2.size(); ++idx)
      if (sc.d[idx] != 0.0) needS[static_cast<std::size_t>(B2[idx].first)] = 1;

    std::vector<double> ic(needC.size(), 0.0), is(needS.size(), 0.0);
    for (std::size_t i = 0; i < needC.size(); ++i)
      if (needC[i])
        ic[i] = sector_cos_integral(pieces[s], static_cast<int>(i), model.a,
                                    rho, tol);
    for (std::size_t i = 0; i < needS.size(); ++i)
      if (needS[i])
        is[i] = sector_sin_integral(pieces[s], static_cast<int>(i), model.a,
                                    rho, tol);

    for (std::size_t idx = 0; idx < B1.size(); ++idx) {
      const auto [i, p] = B1[idx];
      if (sc.c[idx] == 0.0) continue;
      total += sc.c[idx] * powi(rho, i + 2 * p - 1) *
               ic[static_cast<std::size_t>(i)];
    }
    for (std::size_t idx = 0; idx < B2.size(); ++idx) {
      const auto [i, p] = B2[idx];
      if (sc.d[idx] == 0.0) continue;
      total += sc.d[idx] * powi(rho, i + 2 * p) * is[static_cast<std::size_t>(i)];
    }
  }
  return total;
}

SmoothFn m1_system10_fn(const PiecewiseRadialModel& model, double tol) {
  model.validate();
  return SmoothFn(
      [model, tol](double rho) { return m1_system10(model, rho, tol); },
      [model, tol](const Jet& seed) {
        const auto pieces = sector_pieces(model.radials);
        const auto B1 = b1_indices(model.m);
        const auto B2 = b2_indices(model.m);
        Jet total(seed.base_point(), seed.order());
        for (std::size_t s = 0; s < pieces.size(); ++s) {
          const auto& sc = model.mu[s];
          for (const auto& e : pieces[s]) {
            auto has_term = [&](bool sine, int i) {
              if (!sine) {
                for (std::size_t idx = 0; idx < B1.size(); ++idx)
                  if (B1[idx].first == i && sc.c[idx] != 0.0) return true;
              } else {
                for (std::size_t idx = 0; idx < B2.size(); ++idx)
                  if (B2[idx].first == i && sc.d[idx] != 0.0) return true;
              }
              return false;
            };
            for (int i = 0; i <= model.m + 1; ++i) {
              if (!has_term(false, i)) continue;
              Jet integral =
                  integrate_jet(
                      [&](double th) {
                        const double c = std::cos(th);
                        double v = 1.0;
                        for (int q = 0; q < i; ++q) v *= c;
                        return v / (1.0 - model.a * c * seed);
                      },
                      e, tol)
                      .value;
              for (std::size_t idx = 0; idx < B1.size(); ++idx) {
                const auto [bi, p] = B1[idx];
                if (bi != i || sc.c[idx] == 0.0) continue;
                total += sc.c[idx] *
                         (pow(seed, static_cast<double>(i + 2 * p - 1)) *
                          integral);
              }
            }
            for (int i = 0; i <= model.m; ++i) {
              if (!has_term(true, i)) continue;
              Jet integral =
                  integrate_jet(
                      [&](double th) {
                        const double c = std::cos(th);
                        double v = std::sin(th);
                        for (int q = 0; q < i; ++q) v *= c;
                        return v / (1.0 - model.a * c * seed);
                      },
                      e, tol)
                      .value;
              for (std::size_t idx = 0; idx < B2.size(); ++idx) {
                const auto [bi, p] = B2[idx];
                if (bi != i || sc.d[idx] == 0.0) continue;
                total += sc.d[idx] *
                         (pow(seed, static_cast<double>(i + 2 * p)) * integral);
              }
            }
          }
        }
        return total;
      });
}

SmoothFn cs_sector_fn(std::vector<Interval> pieces, int k, double alpha,
                      TrigPart part) {
  return SmoothFn(
      [pieces, k, alpha, part](double y) {
        double total = 0.0;
        for (const auto& e : pieces)
          total += cs_alpha(CSAlphaSpec{e, k, alpha}, y, part);
        return total;
      },
      [pieces, k, alpha, part](const Jet& seed) {
        Jet total(seed.base_point(), seed.order());
        for (const auto& e : pieces) {
          Jet at = cs_alpha_jet(CSAlphaSpec{e, k, alpha}, seed.value(),
                                seed.order(), part);
          total += compose(at, seed);
        }
        return total;
      });
}

ReducedCoefficients reduce_to_B2(const PiecewiseRadialModel& model,
                                 const std::vector<double>& y_grid,
                                 double fit_tol) {
  model.validate();
  const int m = model.m;
  const int n_sectors = model.sector_count();
  const int eta_len = (m + 1) / 2 + 1;
  const int lambda_len = m / 2 + 1;
  const int basis_dim = m + n_sectors * (eta_len + lambda_len);
  if (static_cast<int>(y_grid.size()) < 3 * basis_dim)
    throw UsageError("reduce_to_B2: grid must have >= 3x basis dimension");
  for (double y : y_grid) {
    if (model.a > 0.0 && !(y > 1.0))
      throw UsageError("reduce_to_B2: grid must lie in (1, inf) for a > 0");
    if (model.a < 0.0 && !(y < -1.0))
      throw UsageError("reduce_to_B2: grid must lie in (-inf, -1) for a < 0");
  }

  const auto pieces = sector_pieces(model.radials);

  // Data: y^{m-1} M1((a y)^{-1}).
  std::vector<double> data(y_grid.size());
  parallel_for(y_grid.size(), [&](std::size_t g) {
    const double y = y_grid[g];
    const double rho = 1.0 / (model.a * y);
    data[g] = powi(y, m - 1) * m1_system10(model, rho);
  });
  double scale = 0.0;
  for (double v : data) scale = std::max(scale, std::abs(v));

  RealMatrix basis(static_cast<int>(y_grid.size()), basis_dim);
  parallel_for(y_grid.size(), [&](std::size_t g) {
    const double y = y_grid[g];
    int col = 0;
    for (int i = 0; i < m; ++i) basis.at(static_cast<int>(g), col++) = powi(y, i);
    for (int s = 0; s < n_sectors; ++s)
      for (int p = 0; p < eta_len; ++p) {
        double v = 0.0;
        for (const auto& e : pieces[static_cast<std::size_t>(s)])
          v += cs_alpha(CSAlphaSpec{e, m + 1 - 2 * p, 1.0}, y,
                        TrigPart::cosine);
        basis.at(static_cast<int>(g), col++) = v;
      }
    for (int s = 0; s < n_sectors; ++s)
      for (int p = 0; p < lambda_len; ++p) {
        double v = 0.0;
        for (const auto& e : pieces[static_cast<std::size_t>(s)])
          v += cs_alpha(CSAlphaSpec{e, m - 2 * p, 1.0}, y, TrigPart::sine);
        basis.at(static_cast<int>(g), col++) = v;
      }
  });

  // Column equilibration before the rank-revealing solve.
  std::vector<double> col_scale(static_cast<std::size_t>(basis_dim), 1.0);
  for (int j = 0; j < basis_dim; ++j) {
    double sup = 0.0;
    for (int i = 0; i < basis.rows; ++i)
      sup = std::max(sup, std::abs(basis.at(i, j)));
    if (sup == 0.0) continue;
    col_scale[static_cast<std::size_t>(j)] = sup;
    for (int i = 0; i < basis.rows; ++i) basis.at(i, j) /= sup;
  }

  const LstsqResult fit = lstsq_svd(basis, data, 1e-10);
  const double rel_residual =
      fit.residual_norm /
      (std::sqrt(static_cast<double>(y_grid.size())) * std::max(scale, 1e-300));
  if (rel_residual > fit_tol)
    throw SpanMembershipError(
        "reduce_to_B2: fit residual above tolerance; the reduced value does "
        "not lie in the target span");

  ReducedCoefficients out;
  out.m = m;
  out.a = model.a;
  out.radials = model.radials;
  out.residual = rel_residual;
  int col = 0;
  out.zeta.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i, ++col)
    out.zeta[static_cast<std::size_t>(i)] =
        fit.x[static_cast<std::size_t>(col)] /
        col_scale[static_cast<std::size_t>(col)];
  out.eta.assign(static_cast<std::size_t>(n_sectors), {});
  for (int s = 0; s < n_sectors; ++s) {
    out.eta[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(eta_len));
    for (int p = 0; p < eta_len; ++p, ++col)
      out.eta[static_cast<std::size_t>(s)][static_cast<std::size_t>(p)] =
          fit.x[static_cast<std::size_t>(col)] /
          col_scale[static_cast<std::size_t>(col)];
  }
  out.lambda.assign(static_cast<std::size_t>(n_sectors), {});
  for (int s = 0; s < n_sectors; ++s) {
    out.lambda[static_cast<std::size_t>(s)].resize(
        static_cast<std::size_t>(lambda_len));
    for (int p = 0; p < lambda_len; ++p, ++col)
      out.lambda[static_cast<std::size_t>(s)][static_cast<std::size_t>(p)] =
          fit.x[static_cast<std::size_t>(col)] /
          col_scale[static_cast<std::size_t>(col)];
  }
  return out;
}

double reduced_value(const ReducedCoefficients& coeffs, double y) {
  const auto pieces = sector_pieces(coeffs.radials);
  double total = 0.0;
  for (std::size_t i = 0; i < coeffs.zeta.size(); ++i)
    total += coeffs.zeta[i] * powi(y, static_cast<int>(i));
  for (std::size_t s = 0; s < pieces.size(); ++s) {
    for (std::size_t p = 0; p < coeffs.eta[s].size(); ++p) {
      if (coeffs.eta[s][p] == 0.0) continue;
      double v = 0.0;
      for (const auto& e : pieces[s])
        v += cs_alpha(CSAlphaSpec{e, coeffs.m + 1 - 2 * static_cast<int>(p), 1.0},
                      y, TrigPart::cosine);
      total += coeffs.eta[s][p] * v;
    }
    for (std::size_t p = 0; p < coeffs.lambda[s].size(); ++p) {
      if (coeffs.lambda[s][p] == 0.0) continue;
      double v = 0.0;
      for (const auto& e : pieces[s])
        v += cs_alpha(CSAlphaSpec{e, coeffs.m - 2 * static_cast<int>(p), 1.0},
                      y, TrigPart::sine);
      total += coeffs.lambda[s][p] * v;
    }
  }
  return total;
}

SmoothFn reduced_fn(const ReducedCoefficients& coeffs) {
  const auto pieces = sector_pieces(coeffs.radials);
  std::vector<SmoothFn> members;
  std::vector<double> weights;
  for (std::size_t i = 0; i < coeffs.zeta.size(); ++i) {
    members.push_back(fn::monomial(static_cast<int>(i)));
    weights.push_back(coeffs.zeta[i]);
  }
  for (std::size_t s = 0; s < pieces.size(); ++s) {
    for (std::size_t p = 0; p < coeffs.eta[s].size(); ++p) {
      members.push_back(cs_sector_fn(pieces[s],
                                     coeffs.m + 1 - 2 * static_cast<int>(p),
                                     1.0, TrigPart::cosine));
      weights.push_back(coeffs.eta[s][p]);
    }
    for (std::size_t p = 0; p < coeffs.lambda[s].size(); ++p) {
      members.push_back(cs_sector_fn(pieces[s],
                                     coeffs.m - 2 * static_cast<int>(p), 1.0,
                                     TrigPart::sine));
      weights.push_back(coeffs.lambda[s][p]);
    }
  }
  return fn::linear_combination(std::move(members), std::move(weights));
}

double mth_derivative_reduced(const ReducedCoefficients& coeffs, double y) {
  const auto pieces = sector_pieces(coeffs.radials);
  const int m = coeffs.m;
  double fact = 1.0;
  for (int i = 2; i <= m; ++i) fact *= i;
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  double total = 0.0;
  for (std::size_t s = 0; s < pieces.size(); ++s) {
    for (std::size_t p = 0; p < coeffs.eta[s].size(); ++p) {
      if (coeffs.eta[s][p] == 0.0) continue;
      double v = 0.0;
      for (const auto& e : pieces[s])
        v += cs_alpha(CSAlphaSpec{e, m + 1 - 2 * static_cast<int>(p),
                                  static_cast<double>(m + 1)},
                      y, TrigPart::cosine);
      total += coeffs.eta[s][p] * v;
    }
    for (std::size_t p = 0; p < coeffs.lambda[s].size(); ++p) {
      if (coeffs.lambda[s][p] == 0.0) continue;
      double v = 0.0;
      for (const auto& e : pieces[s])
        v += cs_alpha(CSAlphaSpec{e, m - 2 * static_cast<int>(p),
                                  static_cast<double>(m + 1)},
                      y, TrigPart::sine);
      total += coeffs.lambda[s][p] * v;
    }
  }
  return sign * fact * total;
}

Prop8Case prop8_case_from_string(const std::string& s) {
  if (s == "i") return Prop8Case::i;
  if (s == "ii") return Prop8Case::ii;
  if (s == "iii") return Prop8Case::iii;
  if (s == "iv") return Prop8Case::iv;
  if (s == "v") return Prop8Case::v;
  if (s == "vi") return Prop8Case::vi;
  throw UsageError("unknown case: " + s + " (expected i..vi)");
}

std::string to_string(Prop8Case c) {
  switch (c) {
    case Prop8Case::i: return "i";
    case Prop8Case::ii: return "ii";
    case Prop8Case::iii: return "iii";
    case Prop8Case::iv: return "iv";
    case Prop8Case::v: return "v";
    case Prop8Case::vi: return "vi";
  }
  return "?";
}

std::vector<double> prop8_default_radials(Prop8Case c) {
  switch (c) {
    case Prop8Case::i: return {-kPi / 2, kPi / 2};
    case Prop8Case::ii: return {0.0, kPi / 2};
    case Prop8Case::iii: return {-kPi, 0.0, kPi / 2};
    case Prop8Case::iv: return {-kPi, -kPi / 2, 0.0, kPi / 2};
    case Prop8Case::v: return {-kPi, kPi / 4, kPi / 2};
    case Prop8Case::vi:
      throw UsageError("case vi has no canonical radials; pass them");
  }
  throw UsageError("unknown case");
}

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kRadialTol; }

void validate_case_radials(Prop8Case c, const std::vector<double>& r) {
  auto fail = [&](const char* what) {
    throw ModelError(std::string("radials inconsistent with case ") +
                     to_string(c) + ": " + what);
  };
  switch (c) {
    case Prop8Case::i:
      if (r.size() != 2 || !near(r[0], -kPi / 2) || !near(r[1], kPi / 2))
        fail("expected (-pi/2, pi/2)");
      break;
    case Prop8Case::ii:
      if (r.size() != 2 || !near(r[0], 0.0) || !near(r[1], kPi / 2))
        fail("expected (0, pi/2)");
      break;
    case Prop8Case::iii:
      if (r.size() != 3 || !near(r[0], -kPi) || !near(r[1], 0.0) ||
          !near(r[2], kPi / 2))
        fail("expected (-pi, 0, pi/2)");
      break;
    case Prop8Case::iv:
      if (r.size() != 4 || !near(r[0], -kPi) || !near(r[1], -kPi / 2) ||
          !near(r[2], 0.0) || !near(r[3], kPi / 2))
        fail("expected (-pi, -pi/2, 0, pi/2)");
      break;
    case Prop8Case::v:
      if (r.size() < 3) fail("requires n >= 2");
      if (!near(r.front(), -kPi)) fail("theta_0 must be -pi");
      if (!(r[1] > kRadialTol && r[1] < kPi / 2 - kRadialTol))
        fail("theta_1 must lie strictly inside (0, pi/2)");
      if (!near(r.back(), kPi / 2)) fail("theta_n must be pi/2");
      break;
    case Prop8Case::vi:
      if (r.size() < 2) fail("requires n >= 1");
      break;
  }
}

int card_theta(const std::vector<double>& radials) {
  std::vector<double> th{0.0, kPi / 2, kPi};
  for (double r : radials) th.push_back(std::abs(r));
  std::sort(th.begin(), th.end());
  int count = 0;
  for (std::size_t i = 0; i < th.size(); ++i)
    if (i == 0 || std::abs(th[i] - th[i - 1]) > kRadialTol) ++count;
  return count;
}

}  // namespace

int prop8_bound(Prop8Case c, int m, const std::vector<double>* radials) {
  if (m < 1) throw UsageError("prop8_bound requires m >= 1");
  std::vector<double> r =
      radials != nullptr ? *radials : prop8_default_radials(c);
  validate_case_radials(c, r);
  const int h1 = (m + 1) / 2, h2 = m / 2;
  const int n = static_cast<int>(r.size()) - 1;
  switch (c) {
    case Prop8Case::i: return 2 * h1 + m + 1;
    case Prop8Case::ii: return 2 * h1 + h2 + m + 2;
    case Prop8Case::iii:
    case Prop8Case::iv: return 2 * (h1 + h2) + m + 3;
    case Prop8Case::v: return n * (h1 + h2 + 2) + h1 + m;
    case Prop8Case::vi:
      return (card_theta(r) - 1) * (h1 + h2 + 2) + m - 1;
  }
  throw UsageError("unknown case");
}

FunctionFamily prop8_reduced_basis(Prop8Case c, int m,
                                   const std::vector<double>& radials) {
  validate_case_radials(c, radials);
  if (c == Prop8Case::vi)
    throw UsageError("case vi has no realization basis (bound only)");
  const int h1 = (m + 1) / 2, h2 = m / 2;

  std::vector<SmoothFn> members;
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) {
    members.push_back(fn::monomial(i));
    labels.push_back(i == 0 ? "1" : "y^" + std::to_string(i));
  }

  auto add_c_block = [&](const std::vector<Interval>& pieces,
                         const std::string& tag) {
    for (int p = 0; p <= h1; ++p) {
      members.push_back(
          cs_sector_fn(pieces, m + 1 - 2 * p, 1.0, TrigPart::cosine));
      labels.push_back("C[" + tag + "]_" + std::to_string(m + 1 - 2 * p));
    }
  };
  auto add_s_block = [&](const std::vector<Interval>& pieces,
                         const std::string& tag) {
    for (int p = 0; p <= h2; ++p) {
      members.push_back(cs_sector_fn(pieces, m - 2 * p, 1.0, TrigPart::sine));
      labels.push_back("S[" + tag + "]_" + std::to_string(m - 2 * p));
    }
  };

  const Interval first_quadrant(0.0, kPi / 2);
  const Interval second_quadrant(kPi / 2, kPi);
  const auto sectors = sector_pieces(radials);

  switch (c) {
    case Prop8Case::i:
      add_c_block(sectors[0], "E0");
      add_c_block(sectors[1], "E1");
      break;
    case Prop8Case::ii:
      add_c_block(sectors[0], "E0");
      add_c_block(sectors[1], "E1");
      add_s_block(sectors[0], "E0");
      break;
    case Prop8Case::iii:
      add_c_block({first_quadrant}, "E1");
      add_c_block({second_quadrant}, "E2");
      add_s_block({first_quadrant}, "E1");
      add_s_block({second_quadrant}, "E2");
      break;
    case Prop8Case::iv:
      add_c_block({first_quadrant}, "E2");
      add_c_block({second_quadrant}, "E3");
      add_s_block({first_quadrant}, "E2");
      add_s_block({second_quadrant}, "E3");
      break;
    case Prop8Case::v: {
      add_c_block({Interval(0.0, radials[1])}, "E0+");
      for (std::size_t s = 1; s < sectors.size(); ++s)
        add_c_block(sectors[s], "E" + std::to_string(s));
      for (std::size_t s = 1; s < sectors.size(); ++s)
        add_s_block(sectors[s], "E" + std::to_string(s));
      break;
    }
    case Prop8Case::vi:
      break;  // unreachable
  }

  return FunctionFamily(members, Interval(1.0 + 1e-3, 50.0), labels);
}

namespace {

// M1-shaped chart of a reduced-form combination: rho -> y^{1-m} F(y) with
// y = (a rho)^{-1}.
SmoothFn rho_chart(const SmoothFn& combo, double a, int m) {
  return SmoothFn(
      [combo, a, m](double rho) {
        const double y = 1.0 / (a * rho);
        return std::pow(y, 1 - m) * combo(y);
      },
      [combo, a, m](const Jet& seed) {
        Jet y = pow(seed * a, -1.0);
        return pow(y, static_cast<double>(1 - m)) * combo(y);
      });
}

}  // namespace

Prop8Report prop8_analyze(Prop8Case c, int m, const std::vector<double>* radials,
                          int trials, std::uint64_t seed) {
  Prop8Report report;
  report.case_id = c;
  report.m = m;
  report.trials = trials;
  report.seed = seed;
  std::vector<double> r =
      radials != nullptr ? *radials : prop8_default_radials(c);
  report.bound = prop8_bound(c, m, &r);
  report.card_theta = card_theta(r);
  const double a = 1.0;

  if (c != Prop8Case::vi) {
    const FunctionFamily basis = prop8_reduced_basis(c, m, r);
    if (basis.size() != report.bound + 1)
      throw Error("prop8 basis dimension mismatch (internal)");
    std::vector<double> targets(static_cast<std::size_t>(report.bound));
    const double y_lo = 1.1, y_hi = 40.0;
    for (int j = 0; j < report.bound; ++j)
      targets[static_cast<std::size_t>(j)] =
          report.bound == 1
              ? std::sqrt(y_lo * y_hi)
              : y_lo * std::pow(y_hi / y_lo,
                                static_cast<double>(j) /
                                    static_cast<double>(report.bound - 1));
    const std::vector<double> coeffs = realize_zeros(basis, targets);
    const SmoothFn combo = fn::linear_combination(basis.members(), coeffs);
    const SmoothFn mapped = rho_chart(combo, a, m);
    report.realization =
        count_zeros(mapped, Interval(1.0 / 60.0, 0.995), kDefaultScanResolution);
    report.realized_count = report.realization.total_with_multiplicity;
  }

  // Random coefficient draws on a shared scan grid; M1 is linear in the
  // coefficients, so the per-draw scan is a dot product over precomputed
  // sector integrals.
  const auto pieces = sector_pieces(r);
  const auto B1 = b1_indices(m);
  const auto B2 = b2_indices(m);
  const int n_sectors = static_cast<int>(pieces.size());
  const int grid_n = 2048;
  const double rho_lo = 0.02, rho_hi = 0.98;
  std::vector<double> grid(static_cast<std::size_t>(grid_n));
  for (int g = 0; g < grid_n; ++g)
    grid[static_cast<std::size_t>(g)] =
        rho_lo + (rho_hi - rho_lo) * (g + 0.5) / grid_n;

  std::vector<std::vector<std::vector<double>>> ic(
      grid.size(), std::vector<std::vector<double>>(
                       static_cast<std::size_t>(n_sectors),
                       std::vector<double>(static_cast<std::size_t>(m) + 2)));
  std::vector<std::vector<std::vector<double>>> is(
      grid.size(), std::vector<std::vector<double>>(
                       static_cast<std::size_t>(n_sectors),
                       std::vector<double>(static_cast<std::size_t>(m) + 1)));
  parallel_for(grid.size(), [&](std::size_t g) {
    for (int s = 0; s < n_sectors; ++s) {
      for (int i = 0; i <= m + 1; ++i)
        ic[g][static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] =
            sector_cos_integral(pieces[static_cast<std::size_t>(s)], i, a,
                                grid[g], 1e-10);
      for (int i = 0; i <= m; ++i)
        is[g][static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] =
            sector_sin_integral(pieces[static_cast<std::size_t>(s)], i, a,
                                grid[g], 1e-10);
    }
  });

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  report.max_random_count = 0;
  std::vector<double> values(grid.size());
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<SectorCoeffs> mu(static_cast<std::size_t>(n_sectors));
    for (auto& sc : mu) {
      sc.c.resize(B1.size());
      sc.d.resize(B2.size());
      for (double& v : sc.c) v = normal(rng);
      for (double& v : sc.d) v = normal(rng);
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double rho = grid[g];
      double total = 0.0;
      for (int s = 0; s < n_sectors; ++s) {
        const auto& sc = mu[static_cast<std::size_t>(s)];
        for (std::size_t idx = 0; idx < B1.size(); ++idx) {
          const auto [i, p] = B1[idx];
          total += sc.c[idx] * powi(rho, i + 2 * p - 1) *
                   ic[g][static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
        }
        for (std::size_t idx = 0; idx < B2.size(); ++idx) {
          const auto [i, p] = B2[idx];
          total += sc.d[idx] * powi(rho, i + 2 * p) *
                   is[g][static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
        }
      }
      values[g] = total;
    }
    const ZeroReport zr = count_zeros_from_samples(grid, values, nullptr);
    report.max_random_count =
        std::max(report.max_random_count, zr.total_with_multiplicity);
  }
  return report;
}

}  // namespace chebmel
