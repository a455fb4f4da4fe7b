#include "chebmel/suites.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "chebmel/melnikov.hpp"
#include "chebmel/verify.hpp"

namespace chebmel {

namespace {

constexpr double kPi = 3.14159265358979323846;

void add_case(SuiteResult& r, const std::string& name, double value,
              double allowed) {
  SuiteCase c{name, value, allowed, value <= allowed};
  r.worst_ratio = std::max(r.worst_ratio, allowed > 0 ? value / allowed : 1.0);
  r.cases.push_back(std::move(c));
}

void add_flag(SuiteResult& r, const std::string& name, bool ok) {
  add_case(r, name, ok ? 0.0 : 1.0, 0.5);
}

SmoothFn random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (double& v : c) v = coef(rng);
  return fn::poly(std::move(c));
}

SuiteResult suite_lemma_2_6(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "lemma2.6";
  std::mt19937_64 rng(seed);
  const Interval unit(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::vector<SmoothFn>> phis(2, std::vector<SmoothFn>(2));
    for (auto& row : phis)
      for (auto& f : row) f = random_poly(rng, 4);
    add_case(r, "2x2 #" + std::to_string(rep),
             verify_lemma_2_6(phis, {unit, unit}), 1e-8);
  }
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<SmoothFn>> phis(3, std::vector<SmoothFn>(3));
    for (auto& row : phis)
      for (auto& f : row) f = random_poly(rng, 3);
    add_case(r, "3x3 #" + std::to_string(rep),
             verify_lemma_2_6(phis, {unit, unit, unit}), 1e-8);
  }
  return r;
}

SuiteResult suite_prop2(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "prop2";

  {  // exponential kernel, single member: both sides are the same integral
    IntegralFamilySpec spec;
    IntegralFamilyPiece piece;
    piece.E = Interval(0.0, 1.0);
    piece.weights = {fn::constant(1.0)};
    piece.G = BivariateFn(
        [](double t, const Jet& y) { return exp(y * t); });
    spec.pieces.push_back(std::move(piece));
    spec.U = Interval(-2.0, 2.0);
    const Prop2Result res = verify_prop2(spec, 0.7, {0, {0}});
    add_case(r, "exp kernel k0=0", res.residual, 1e-9);
  }
  {  // (1 - y t)^{-1} with weights {1, t} at y = 0
    IntegralFamilySpec spec;
    IntegralFamilyPiece piece;
    piece.E = Interval(0.0, 0.5);
    piece.weights = {fn::constant(1.0), fn::identity()};
    piece.G = BivariateFn::power_kernel(fn::identity(), 1.0);
    spec.pieces.push_back(std::move(piece));
    spec.U = Interval(-1.0, 1.0);
    const Prop2Result res = verify_prop2(spec, 0.0, {0, {1}});
    add_case(r, "rational kernel k0=1", res.residual, 1e-7);
  }
  {  // two pieces sharing (1 - y t)^{-1/2}
    IntegralFamilySpec spec;
    IntegralFamilyPiece p0, p1;
    p0.E = Interval(0.0, 0.2);
    p0.weights = {fn::constant(1.0)};
    p0.G = BivariateFn::power_kernel(fn::identity(), 0.5);
    p1.E = Interval(0.3, 0.5);
    p1.weights = {fn::constant(1.0)};
    p1.G = BivariateFn::power_kernel(fn::identity(), 0.5);
    spec.pieces.push_back(std::move(p0));
    spec.pieces.push_back(std::move(p1));
    spec.U = Interval(-1.0, 1.0);
    const Prop2Result res = verify_prop2(spec, 0.5, {1, {0, 0}});
    add_case(r, "two-piece sqrt kernel", res.residual, 1e-7);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ydist(-0.8, 0.8);
  const double alphas[3] = {0.5, 1.0, 1.5};
  for (int rep = 0; rep < 10; ++rep) {
    const bool use_t = rep % 2 == 0;
    const SmoothFn g = use_t ? fn::identity() : fn::cos(1.0);
    const Interval E = use_t ? Interval(0.0, 0.45) : Interval(0.1, 1.0);
    const double alpha = alphas[rep % 3];
    const double y = ydist(rng);
    IntegralFamilySpec spec =
        power_kernel_family(g, alpha, E, Interval(-0.9, 0.9), 1);
    const Prop2Result res = verify_prop2(spec, y, {0, {1}});
    std::ostringstream name;
    name << "random kernel #" << rep << " g=" << (use_t ? "t" : "cos t")
         << " alpha=" << alpha;
    add_case(r, name.str(), res.residual, 1e-6);
  }
  return r;
}

std::vector<double> span_grid(const Interval& e, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = e.lo + e.length() * (i + 0.5) / n;
  return g;
}

SmoothFn cos_pow(int j) { return fn::power_of(fn::cos(1.0), j); }

SuiteResult suite_eq24(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "eq24";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th_dist(-kPi, kPi);
  for (int k = 0; k <= 10; ++k) {
    const auto c = chebpoly_expand(k);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      const double th = th_dist(rng);
      double sum = 0.0, cp = 1.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        sum += static_cast<double>(c[i]) * cp;
        cp *= std::cos(th);
      }
      worst = std::max(worst, std::abs(std::cos(k * th) - sum));
    }
    add_case(r, "chebpoly k=" + std::to_string(k), worst, 1e-12);
  }

  const Interval dom(0.0, kPi);
  for (int i = 1; i <= 4; ++i) {
    const auto grid = span_grid(dom, 16 * (i + 1));
    {
      std::vector<SmoothFn> a_m, b_m;
      for (int j = 0; j <= i; ++j) {
        a_m.push_back(j == 0 ? fn::constant(1.0) : fn::cos(j));
        b_m.push_back(cos_pow(j));
      }
      const SpanReport rep = span_equal({FunctionFamily(a_m, dom), grid},
                                        {FunctionFamily(b_m, dom), grid});
      add_flag(r, "span cos multiples i=" + std::to_string(i), rep.equal);
    }
    {
      std::vector<SmoothFn> a_m, b_m;
      for (int j = 0; j <= i; ++j) {
        a_m.push_back(j == 0 ? fn::constant(1.0) : fn::cos(2 * j));
        b_m.push_back(cos_pow(2 * j));
      }
      const SpanReport rep = span_equal({FunctionFamily(a_m, dom), grid},
                                        {FunctionFamily(b_m, dom), grid});
      add_flag(r, "span even cos i=" + std::to_string(i), rep.equal);
    }
    {
      std::vector<SmoothFn> a_m, b_m, c_m;
      for (int j = 0; j <= i; ++j) {
        a_m.push_back(fn::cos(2 * j + 1));
        b_m.push_back(cos_pow(2 * j + 1));
        c_m.push_back(j == 0 ? fn::cos(1)
                             : fn::cos(1) * fn::cos(2 * j));
      }
      const SpanReport r1 = span_equal({FunctionFamily(a_m, dom), grid},
                                       {FunctionFamily(b_m, dom), grid});
      const SpanReport r2 = span_equal({FunctionFamily(a_m, dom), grid},
                                       {FunctionFamily(c_m, dom), grid});
      add_flag(r, "span odd cos i=" + std::to_string(i), r1.equal && r2.equal);
    }
  }
  return r;
}

SuiteResult suite_eq37(std::uint64_t) {
  SuiteResult r;
  r.suite = "eq37";
  const Interval dom(0.0, kPi);
  for (int i = 1; i <= 4; ++i) {
    const auto grid = span_grid(dom, 16 * (i + 1));
    {
      std::vector<SmoothFn> a_m, b_m;
      for (int j = 1; j <= i; ++j) {
        a_m.push_back(fn::sin(j));
        b_m.push_back(fn::sin(1) * cos_pow(j - 1));
      }
      const SpanReport rep = span_equal({FunctionFamily(a_m, dom), grid},
                                        {FunctionFamily(b_m, dom), grid});
      add_flag(r, "span sin multiples i=" + std::to_string(i), rep.equal);
    }
    {
      std::vector<SmoothFn> a_m, b_m, c_m;
      for (int j = 1; j <= i; ++j) {
        a_m.push_back(fn::sin(2 * j));
        b_m.push_back(fn::sin(1) * cos_pow(2 * j - 1));
        c_m.push_back(fn::sin(1) * fn::cos(2 * j - 1));
      }
      const SpanReport r1 = span_equal({FunctionFamily(a_m, dom), grid},
                                       {FunctionFamily(b_m, dom), grid});
      const SpanReport r2 = span_equal({FunctionFamily(a_m, dom), grid},
                                       {FunctionFamily(c_m, dom), grid});
      add_flag(r, "span even sin i=" + std::to_string(i), r1.equal && r2.equal);
    }
    {
      std::vector<SmoothFn> a_m, b_m, c_m;
      for (int j = 0; j <= i; ++j) {
        a_m.push_back(fn::sin(2 * j + 1));
        b_m.push_back(fn::sin(1) * cos_pow(2 * j));
        c_m.push_back(j == 0 ? fn::sin(1) : fn::sin(1) * fn::cos(2 * j));
      }
      const SpanReport r1 = span_equal({FunctionFamily(a_m, dom), grid},
                                       {FunctionFamily(b_m, dom), grid});
      const SpanReport r2 = span_equal({FunctionFamily(a_m, dom), grid},
                                       {FunctionFamily(c_m, dom), grid});
      add_flag(r, "span odd sin i=" + std::to_string(i), r1.equal && r2.equal);
    }
  }
  return r;
}

SuiteResult suite_lemma_2_9(std::uint64_t) {
  SuiteResult r;
  r.suite = "lemma2.9";
  const Interval E(0.0, kPi);
  const double ys[3] = {1.5, 2.0, 5.0};
  for (int kappa = 0; kappa <= 1; ++kappa) {
    const TrigPart part = kappa == 0 ? TrigPart::cosine : TrigPart::sine;
    for (int k = 0; k <= 3; ++k) {
      for (int l = -1; l <= 2; ++l) {
        if (k + l < 0) continue;
        for (double y : ys) {
          const double lhs =
              std::pow(y, l) * cs_alpha(CSAlphaSpec{E, k, 1.0}, y, part);
          const double rhs =
              cs_alpha(CSAlphaSpec{E, k + l, 1.0}, y, part) +
              std::pow(y, l) * t_polynomial(E, kappa, k - 1, y) -
              t_polynomial(E, kappa, k + l - 1, y);
          std::ostringstream name;
          name << "kappa=" << kappa << " k=" << k << " l=" << l << " y=" << y;
          add_case(r, name.str(), std::abs(lhs - rhs), 1e-8);
        }
      }
    }
  }
  return r;
}

SuiteResult suite_prop6(std::uint64_t) {
  SuiteResult r;
  r.suite = "prop6";
  const std::vector<double> radials{0.0, kPi / 2};
  const auto pieces = sector_pieces(radials);
  for (int m = 1; m <= 2; ++m) {
    const auto B1 = b1_indices(m), B2 = b2_indices(m);
    std::vector<SmoothFn> b1_gens, b2_gens;
    for (std::size_t s = 0; s < pieces.size(); ++s) {
      for (const auto& [i, p] : B1)
        b1_gens.push_back(fn::monomial(m - (i + 2 * p - 1)) *
                          cs_sector_fn(pieces[s], i, 1.0, TrigPart::cosine));
      for (const auto& [i, p] : B2)
        b2_gens.push_back(fn::monomial(m - (i + 2 * p)) *
                          cs_sector_fn(pieces[s], i, 1.0, TrigPart::sine));
    }
    std::vector<SmoothFn> lhs = b1_gens;
    lhs.insert(lhs.end(), b2_gens.begin(), b2_gens.end());

    std::vector<SmoothFn> rhs;
    for (int i = 0; i < m; ++i) rhs.push_back(fn::monomial(i));
    for (std::size_t s = 0; s < pieces.size(); ++s) {
      for (int p = 0; p <= (m + 1) / 2; ++p)
        rhs.push_back(
            cs_sector_fn(pieces[s], m + 1 - 2 * p, 1.0, TrigPart::cosine));
      for (int p = 0; p <= m / 2; ++p)
        rhs.push_back(cs_sector_fn(pieces[s], m - 2 * p, 1.0, TrigPart::sine));
    }

    const int dim = static_cast<int>(std::max(lhs.size(), rhs.size()));
    std::vector<double> grid(static_cast<std::size_t>(8 * dim));
    for (std::size_t i = 0; i < grid.size(); ++i)
      grid[i] = 1.05 * std::pow(50.0 / 1.05,
                                static_cast<double>(i) /
                                    static_cast<double>(grid.size() - 1));
    const Interval dom(1.0 + 1e-3, 51.0);
    const SpanReport rep =
        span_equal({FunctionFamily(lhs, dom), grid},
                   {FunctionFamily(rhs, dom), grid}, 1e-8);
    add_flag(r, "B1=B2 m=" + std::to_string(m), rep.equal);
  }
  return r;
}

SuiteResult suite_prop6_1(std::uint64_t) {
  SuiteResult r;
  r.suite = "prop6.1";
  const double a = 1.0;
  for (int m = 1; m <= 2; ++m) {
    // flattened (rho, theta) grid
    std::vector<std::pair<double, double>> grid;
    for (int gi = 0; gi < 12; ++gi)
      for (int gj = 0; gj < 24; ++gj)
        grid.emplace_back(0.05 + 0.85 * gi / 11.0,
                          -kPi + 2 * kPi * (gj + 0.5) / 24.0);

    auto den = [a](double rho, double th) {
      return 1.0 - a * rho * std::cos(th);
    };

    std::vector<std::function<double(double, double)>> v0, v1;
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= j; ++i) {
        v0.push_back([i, j, den](double rho, double th) {
          return std::pow(rho, j) * std::pow(std::cos(th), i + 1) *
                 std::pow(std::sin(th), j - i) / den(rho, th);
        });
        v0.push_back([i, j, den](double rho, double th) {
          return std::pow(rho, j) * std::pow(std::cos(th), i) *
                 std::pow(std::sin(th), j + 1 - i) / den(rho, th);
        });
      }
    for (const auto& [i, p] : b1_indices(m))
      v1.push_back([i = i, p = p, den](double rho, double th) {
        return std::pow(rho, i + 2 * p - 1) * std::pow(std::cos(th), i) /
               den(rho, th);
      });
    for (const auto& [i, p] : b2_indices(m))
      v1.push_back([i = i, p = p, den](double rho, double th) {
        return std::pow(rho, i + 2 * p) * std::sin(th) *
               std::pow(std::cos(th), i) / den(rho, th);
      });

    RealMatrix ma(static_cast<int>(grid.size()), static_cast<int>(v0.size()));
    RealMatrix mb(static_cast<int>(grid.size()), static_cast<int>(v1.size()));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (std::size_t j = 0; j < v0.size(); ++j)
        ma.at(static_cast<int>(g), static_cast<int>(j)) =
            v0[j](grid[g].first, grid[g].second);
      for (std::size_t j = 0; j < v1.size(); ++j)
        mb.at(static_cast<int>(g), static_cast<int>(j)) =
            v1[j](grid[g].first, grid[g].second);
    }
    const SpanReport rep = span_equal_samples(ma, mb, 1e-8);
    add_flag(r, "V0=V1 m=" + std::to_string(m), rep.equal);
  }
  return r;
}

SuiteResult suite_appendix_a1(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "appendixA1";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th_dist(0.05, kPi - 0.05);
  const Interval dom(0.0, kPi);
  for (int m = 1; m <= 4; ++m) {
    for (int i = 1; i <= m; ++i) {
      std::vector<SmoothFn> full;
      for (int j = 0; j <= m; ++j)
        full.push_back(j == 0 ? fn::constant(1.0) : fn::cos(j));
      for (int j = m; j >= i; --j) full.push_back(fn::sin(j));
      FunctionFamily big(full, dom);

      std::vector<SmoothFn> reduced;
      for (int j = 0; j < i; ++j)
        reduced.push_back(j == 0 ? fn::constant(1.0) : fn::cos(j));
      FunctionFamily small(reduced, dom);

      double factor = 1.0;
      for (int l = i; l <= m; ++l) {
        double f = static_cast<double>(l) * l * l;
        for (int j = 1; j <= l - 1; ++j) f *= static_cast<double>(l) * l - j * j;
        for (int j = i; j <= l - 1; ++j) f *= static_cast<double>(l) * l - j * j;
        factor *= f;
      }

      double worst = 0.0;
      for (int rep = 0; rep < 20; ++rep) {
        const double th = th_dist(rng);
        const double lhs = wronskian_continuous(big, th);
        const double rhs = factor * wronskian_continuous(small, th);
        worst = std::max(worst,
                         std::abs(lhs - rhs) / std::max(1e-12, std::abs(lhs)));
      }
      add_case(r, "recursion m=" + std::to_string(m) + " i=" + std::to_string(i),
               worst, 1e-6);
    }
  }
  return r;
}

}  // namespace

std::vector<std::string> identity_suite_names() {
  return {"lemma2.6", "prop2",  "eq24",    "eq37",
          "lemma2.9", "prop6", "prop6.1", "appendixA1"};
}

SuiteResult run_identity_suite(const std::string& name, std::uint64_t seed) {
  SuiteResult r;
  if (name == "lemma2.6")
    r = suite_lemma_2_6(seed);
  else if (name == "prop2")
    r = suite_prop2(seed);
  else if (name == "eq24")
    r = suite_eq24(seed);
  else if (name == "eq37")
    r = suite_eq37(seed);
  else if (name == "lemma2.9")
    r = suite_lemma_2_9(seed);
  else if (name == "prop6")
    r = suite_prop6(seed);
  else if (name == "prop6.1")
    r = suite_prop6_1(seed);
  else if (name == "appendixA1")
    r = suite_appendix_a1(seed);
  else
    throw UsageError("unknown identity suite: " + name);
  r.pass = true;
  for (const auto& c : r.cases) r.pass = r.pass && c.pass;
  return r;
}

}  // namespace chebmel
