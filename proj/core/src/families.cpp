#include "chebmel/families.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace chebmel {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_integer(double x) { return x == std::floor(x); }

// Range of cos over [lo, hi].
std::pair<double, double> cos_range(const Interval& E) {
  double mn = std::min(std::cos(E.lo), std::cos(E.hi));
  double mx = std::max(std::cos(E.lo), std::cos(E.hi));
  // A multiple of pi inside the interval pins an extremum.
  const double k_lo = std::ceil(E.lo / kPi);
  const double k_hi = std::floor(E.hi / kPi);
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    const double kk = std::abs(std::fmod(k, 2.0));
    if (kk < 0.5)
      mx = 1.0;
    else
      mn = -1.0;
  }
  return {mn, mx};
}

}  // namespace

void TrigIntegralSpec::validate() const {
  E.validate();
  if (nu < 1) throw UsageError("cs_trig requires nu >= 1");
  if (k < 0) throw UsageError("cs_trig requires k >= 0");
  if (!xi.valid()) throw UsageError("cs_trig requires a weight function");
}

double cs_trig(const TrigIntegralSpec& spec, double y, TrigPart part,
               double tol) {
  spec.validate();
  const int k = spec.k, nu = spec.nu;
  const double alpha = spec.alpha;
  const SmoothFn xi = spec.xi;
  auto integrand = [xi, k, nu, alpha, y, part](double th) {
    const double base = 1.0 - y * std::cos(nu * th);
    if (base <= 0.0)
      throw DomainError("cs_trig base 1 - y cos(nu th) nonpositive");
    const double trig = part == TrigPart::cosine ? std::cos(k * th)
                                                 : std::sin(k * th);
    return xi(th) * trig * std::pow(base, -alpha);
  };
  return integrate(integrand, spec.E, tol).value;
}

Jet cs_trig_jet(const TrigIntegralSpec& spec, double y, int order,
                TrigPart part, double tol) {
  spec.validate();
  const int k = spec.k, nu = spec.nu;
  const double alpha = spec.alpha;
  const SmoothFn xi = spec.xi;
  auto integrand = [xi, k, nu, alpha, y, order, part](double th) {
    Jet yj = Jet::variable(y, order);
    Jet base = 1.0 - yj * std::cos(nu * th);
    if (base.value() <= 0.0)
      throw DomainError("cs_trig base 1 - y cos(nu th) nonpositive");
    const double trig = part == TrigPart::cosine ? std::cos(k * th)
                                                 : std::sin(k * th);
    return pow(base, -alpha) * (xi(th) * trig);
  };
  return integrate_jet(integrand, spec.E, tol).value;
}

namespace {

void check_cs_alpha_domain(const CSAlphaSpec& spec, double y,
                           bool allow_unsafe) {
  spec.E.validate();
  if (spec.k < 0) throw UsageError("cs_alpha requires k >= 0");
  if (spec.alpha == 0.0) return;  // no denominator
  const auto [cmin, cmax] = cos_range(spec.E);
  if (y >= cmin && y <= cmax)
    throw PoleError("cs_alpha denominator y - cos th vanishes on E");
  if (std::abs(y) <= 1.0 && !allow_unsafe)
    throw PoleError("cs_alpha requires |y| > 1 (or an explicit override)");
  if (y < cmin && !is_integer(spec.alpha))
    throw DomainError("cs_alpha: negative denominator with fractional alpha");
  if (spec.alpha > 1.0 && std::abs(y) > 1.0 && std::abs(y) < 1.0 + 1e-6)
    throw DomainError(
        "cs_alpha: |y| within 1e-6 of 1 with alpha > 1 is ill-conditioned");
}

}  // namespace

double cs_alpha(const CSAlphaSpec& spec, double y, TrigPart part,
                bool allow_unsafe, double tol) {
  check_cs_alpha_domain(spec, y, allow_unsafe);
  const int k = spec.k;
  const double alpha = spec.alpha;
  auto integrand = [k, alpha, y, part](double th) {
    const double c = std::cos(th);
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= c;
    if (part == TrigPart::sine) v *= std::sin(th);
    if (alpha == 0.0) return v;
    return v * std::pow(y - c, -alpha);
  };
  return integrate(integrand, spec.E, tol).value;
}

Jet cs_alpha_jet(const CSAlphaSpec& spec, double y, int order, TrigPart part,
                 double tol) {
  check_cs_alpha_domain(spec, y, false);
  const int k = spec.k;
  const double alpha = spec.alpha;
  auto integrand = [k, alpha, y, order, part](double th) {
    const double c = std::cos(th);
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= c;
    if (part == TrigPart::sine) v *= std::sin(th);
    Jet yj = Jet::variable(y, order);
    if (alpha == 0.0) return Jet::constant(v, y, order);
    return pow(yj - c, -alpha) * v;
  };
  return integrate_jet(integrand, spec.E, tol).value;
}

namespace {

// Cached moments mu_{kappa,j}(E) = int_E sin^kappa th cos^j th dth.
std::map<std::tuple<double, double, int, int>, double> g_moment_cache;
std::mutex g_moment_mutex;

double trig_moment(const Interval& E, int kappa, int j) {
  const auto key = std::make_tuple(E.lo, E.hi, kappa, j);
  {
    std::lock_guard<std::mutex> lock(g_moment_mutex);
    auto it = g_moment_cache.find(key);
    if (it != g_moment_cache.end()) return it->second;
  }
  auto integrand = [kappa, j](double th) {
    double v = kappa == 1 ? std::sin(th) : 1.0;
    const double c = std::cos(th);
    for (int i = 0; i < j; ++i) v *= c;
    return v;
  };
  const double value = integrate(integrand, E, 1e-12).value;
  std::lock_guard<std::mutex> lock(g_moment_mutex);
  g_moment_cache.emplace(key, value);
  return value;
}

}  // namespace

double t_polynomial(const Interval& E, int kappa, int q, double y) {
  if (kappa != 0 && kappa != 1) throw UsageError("t_polynomial: kappa in {0,1}");
  if (q < -1) throw UsageError("t_polynomial requires q >= -1");
  if (q == -1) return 0.0;
  double total = 0.0;
  for (int i = 1; i <= q + 1; ++i) {
    // inner integral int_E sin^kappa (y - cos)^{i-1} via cached moments
    double inner = 0.0;
    for (int j = 0; j <= i - 1; ++j) {
      double sign = (j % 2 == 0) ? 1.0 : -1.0;
      inner += binomial(i - 1, j) * sign * std::pow(y, i - 1 - j) *
               trig_moment(E, kappa, j);
    }
    const double sign_i = (i % 2 == 0) ? 1.0 : -1.0;
    total += binomial(q + 1, i) * sign_i * std::pow(y, q + 1 - i) * inner;
  }
  return total;
}

std::vector<long long> chebpoly_expand(int k) {
  if (k < 0) throw UsageError("chebpoly_expand requires k >= 0");
  std::vector<long long> prev{1};  // T_0
  if (k == 0) return prev;
  std::vector<long long> cur{0, 1};  // T_1
  for (int n = 1; n < k; ++n) {
    std::vector<long long> next(static_cast<std::size_t>(n) + 2, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> cospow_expand(int j) {
  if (j < 0) throw UsageError("cospow_expand requires j >= 0");
  std::vector<double> w(static_cast<std::size_t>(j) + 1, 0.0);
  if (j == 0) {
    w[0] = 1.0;
    return w;
  }
  const double scale = std::pow(2.0, 1 - j);
  for (int i = 0; 2 * i < j; ++i)
    w[static_cast<std::size_t>(j - 2 * i)] = scale * binomial(j, i);
  if (j % 2 == 0) w[0] = std::pow(2.0, -j) * binomial(j, j / 2);
  return w;
}

TrigFamilyKind trig_kind_from_string(const std::string& s) {
  if (s == "cos-full") return TrigFamilyKind::cos_full;
  if (s == "sin-full") return TrigFamilyKind::sin_full;
  if (s == "mixed-full") return TrigFamilyKind::mixed_full;
  if (s == "cos-parity") return TrigFamilyKind::cos_parity;
  if (s == "sin-parity") return TrigFamilyKind::sin_parity;
  if (s == "mixed-parity") return TrigFamilyKind::mixed_parity;
  throw UsageError("unknown trig family kind: " + s);
}

std::string to_string(TrigFamilyKind kind) {
  switch (kind) {
    case TrigFamilyKind::cos_full: return "cos-full";
    case TrigFamilyKind::sin_full: return "sin-full";
    case TrigFamilyKind::mixed_full: return "mixed-full";
    case TrigFamilyKind::cos_parity: return "cos-parity";
    case TrigFamilyKind::sin_parity: return "sin-parity";
    case TrigFamilyKind::mixed_parity: return "mixed-parity";
  }
  throw UsageError("unknown trig family kind");
}

namespace {

SmoothFn cos_member(int freq) {
  return freq == 0 ? fn::constant(1.0) : fn::cos(freq);
}

std::string cos_label(int freq) {
  if (freq == 0) return "1";
  if (freq == 1) return "cos(th)";
  return "cos(" + std::to_string(freq) + " th)";
}

std::string sin_label(int freq) {
  if (freq == 1) return "sin(th)";
  return "sin(" + std::to_string(freq) + " th)";
}

}  // namespace

FunctionFamily make_trig_family(TrigFamilyKind kind, int m, int k) {
  if (m < 1) throw UsageError("trig family requires m >= 1");
  std::vector<SmoothFn> members;
  std::vector<std::string> labels;
  const Interval full(0.0, kPi);
  const Interval lower_half(0.0, kPi / 2.0);

  switch (kind) {
    case TrigFamilyKind::cos_full:
      for (int j = 0; j <= m; ++j) {
        members.push_back(cos_member(j));
        labels.push_back(cos_label(j));
      }
      return FunctionFamily(members, full, labels);
    case TrigFamilyKind::sin_full:
      for (int j = 1; j <= m; ++j) {
        members.push_back(fn::sin(j));
        labels.push_back(sin_label(j));
      }
      return FunctionFamily(members, full, labels);
    case TrigFamilyKind::mixed_full:
      for (int j = 0; j <= m; ++j) {
        members.push_back(cos_member(j));
        labels.push_back(cos_label(j));
      }
      for (int j = m; j >= 1; --j) {
        members.push_back(fn::sin(j));
        labels.push_back(sin_label(j));
      }
      return FunctionFamily(members, full, labels);
    default:
      break;
  }

  if (k != 0 && k != 1)
    throw UsageError("parity trig families require k in {0,1}");
  const int l = (1 + (k % 2 == 0 ? 1 : -1)) / 2;  // 1 for even k, 0 for odd

  switch (kind) {
    case TrigFamilyKind::cos_parity:
      for (int j = 0; j <= m; ++j) {
        members.push_back(cos_member(k + 2 * j));
        labels.push_back(cos_label(k + 2 * j));
      }
      break;
    case TrigFamilyKind::sin_parity:
      for (int j = l; j <= m; ++j) {
        members.push_back(fn::sin(k + 2 * j));
        labels.push_back(sin_label(k + 2 * j));
      }
      break;
    case TrigFamilyKind::mixed_parity:
      for (int j = 0; j <= m; ++j) {
        members.push_back(cos_member(k + 2 * j));
        labels.push_back(cos_label(k + 2 * j));
      }
      for (int j = m; j >= l; --j) {
        members.push_back(fn::sin(k + 2 * j));
        labels.push_back(sin_label(k + 2 * j));
      }
      break;
    default:
      throw UsageError("unreachable trig family kind");
  }
  return FunctionFamily(members, lower_half, labels);
}

void PowerFamilySpec::validate() const {
  if (a.empty() || a.size() != m.size())
    throw UsageError("power family: a and m must be nonempty, equal length");
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!(a[i] > a[i + 1]))
      throw UsageError("power family: a must be strictly decreasing");
  if (a.back() <= 0.0) throw UsageError("power family: a must be positive");
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    if (m[i] < m[i + 1])
      throw UsageError("power family: m must be nonincreasing");
  for (int mi : m)
    if (mi < 0) throw UsageError("power family: m entries must be >= 0");
  if (m0 < -1) throw UsageError("power family: m0 >= -1 required");
  if (!negative_test) {
    const bool beta_bad = beta >= 0.0 && is_integer(beta);
    if (beta_bad || !(beta < m0 - m.front() + 1))
      throw UsageError(
          "power family: inadmissible (beta, m0, m1); pass negative_test to "
          "construct anyway");
  }
}

FunctionFamily make_power_family(const PowerFamilySpec& spec) {
  spec.validate();
  std::vector<SmoothFn> members;
  std::vector<std::string> labels;
  for (int j = 0; j <= spec.m0; ++j) {
    members.push_back(fn::monomial(j));
    labels.push_back(j == 0 ? "1" : "y^" + std::to_string(j));
  }
  for (std::size_t i = 0; i < spec.a.size(); ++i) {
    for (int j = 0; j <= spec.m[i]; ++j) {
      members.push_back(fn::monomial(j) *
                        fn::shifted_power(spec.a[i], spec.beta));
      std::ostringstream lab;
      if (j == 1)
        lab << "y ";
      else if (j > 1)
        lab << "y^" << j << " ";
      lab << "(y+" << spec.a[i] << ")^" << spec.beta;
      labels.push_back(lab.str());
    }
  }
  Interval domain(-spec.a.back(), std::numeric_limits<double>::infinity());
  return FunctionFamily(members, domain, labels);
}

int IntegralFamilySpec::piece_weight_count(int i) const {
  return static_cast<int>(pieces[static_cast<std::size_t>(i)].weights.size());
}

int IntegralFamilySpec::member_count() const {
  int n = 0;
  for (const auto& p : pieces) n += static_cast<int>(p.weights.size());
  return n;
}

double eval_integral_family(const IntegralFamilySpec& spec, int i, int j,
                            double y, int deriv, double tol) {
  if (i < 0 || i >= static_cast<int>(spec.pieces.size()))
    throw UsageError("eval_integral_family: piece index out of range");
  const auto& piece = spec.pieces[static_cast<std::size_t>(i)];
  if (j < 0 || j >= static_cast<int>(piece.weights.size()))
    throw UsageError("eval_integral_family: weight index out of range");
  if (deriv < 0) throw UsageError("eval_integral_family: deriv >= 0 required");
  const SmoothFn w = piece.weights[static_cast<std::size_t>(j)];
  const BivariateFn G = piece.G;
  if (deriv == 0) {
    return integrate([w, G, y](double t) { return w(t) * G(t, y); }, piece.E,
                     tol)
        .value;
  }
  auto integrand = [w, G, y, deriv](double t) {
    return w(t) * G.jet_second(t, y, deriv).derivative(deriv);
  };
  return integrate(integrand, piece.E, tol).value;
}

FunctionFamily integral_family_functions(const IntegralFamilySpec& spec,
                                         double tol) {
  std::vector<SmoothFn> members;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    const auto& piece = spec.pieces[i];
    for (std::size_t j = 0; j < piece.weights.size(); ++j) {
      const SmoothFn w = piece.weights[j];
      const BivariateFn G = piece.G;
      const Interval E = piece.E;
      members.push_back(SmoothFn(
          [w, G, E, tol](double y) {
            return integrate([&](double t) { return w(t) * G(t, y); }, E, tol)
                .value;
          },
          [w, G, E, tol](const Jet& seed) {
            Jet inner = integrate_jet(
                            [&](double t) {
                              return G.jet_second(t, Jet::variable(
                                                         seed.value(),
                                                         seed.order())) *
                                     w(t);
                            },
                            E, tol)
                            .value;
            return compose(inner, seed);
          }));
      labels.push_back("I_" + std::to_string(i) + "," + std::to_string(j));
    }
  }
  return FunctionFamily(members, spec.U, labels);
}

IntegralFamilySpec power_kernel_family(const SmoothFn& g, double alpha,
                                       const Interval& E, const Interval& U,
                                       int m) {
  if (m < 0) throw UsageError("power_kernel_family requires m >= 0");
  IntegralFamilyPiece piece;
  piece.E = E;
  piece.G = BivariateFn::power_kernel(g, alpha);
  for (int j = 0; j <= m; ++j) piece.weights.push_back(fn::power_of(g, j));
  IntegralFamilySpec spec;
  spec.pieces.push_back(std::move(piece));
  spec.U = U;
  spec.common_kernel = BivariateFn::power_kernel(g, alpha);
  spec.common_domain = E;
  return spec;
}

ParsedFamily parse_family(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("family spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind"))
    throw UsageError("family spec must be an object with a \"kind\" field");
  const std::string kind = doc.at("kind").get<std::string>();

  std::optional<Interval> override_interval;
  if (doc.contains("interval")) {
    const auto iv = doc.at("interval");
    if (!iv.is_array() || iv.size() != 2)
      throw UsageError("family interval must be [lo, hi]");
    override_interval = Interval(iv.at(0).get<double>(), iv.at(1).get<double>());
  }

  if (kind == "trig") {
    const auto variant = trig_kind_from_string(doc.at("variant").get<std::string>());
    const int m = doc.at("m").get<int>();
    const int k = doc.value("k", 0);
    FunctionFamily fam = make_trig_family(variant, m, k);
    if (override_interval) fam = fam.with_domain(*override_interval);
    std::ostringstream id;
    id << "trig/" << to_string(variant) << "-m" << m;
    if (variant == TrigFamilyKind::cos_parity ||
        variant == TrigFamilyKind::sin_parity ||
        variant == TrigFamilyKind::mixed_parity)
      id << "-k" << k;
    return {fam, id.str()};
  }
  if (kind == "power") {
    PowerFamilySpec spec;
    spec.a = doc.at("a").get<std::vector<double>>();
    spec.m = doc.at("m").get<std::vector<int>>();
    spec.m0 = doc.at("m0").get<int>();
    spec.beta = doc.at("beta").get<double>();
    spec.negative_test = doc.value("negative_test", false);
    FunctionFamily fam = make_power_family(spec);
    if (override_interval) fam = fam.with_domain(*override_interval);
    std::ostringstream id;
    id << "power/n" << spec.a.size() << "-m0_" << spec.m0 << "-beta_"
       << spec.beta;
    return {fam, id.str()};
  }
  if (kind == "cs") {
    const auto ks = doc.at("ks").get<std::vector<int>>();
    if (ks.empty()) throw UsageError("cs family requires nonempty ks");
    const auto e = doc.at("e");
    Interval E(e.at(0).get<double>(), e.at(1).get<double>());
    const double alpha = doc.value("alpha", 1.0);
    const int nu = doc.value("nu", 1);
    const std::string which = doc.value("which", std::string("cos"));
    const std::string xi_name = doc.value("xi", std::string("one"));
    SmoothFn xi;
    if (xi_name == "one")
      xi = fn::constant(1.0);
    else if (xi_name == "sin2")
      xi = fn::sin(1.0) * fn::sin(1.0);
    else
      throw UsageError("cs family: xi must be \"one\" or \"sin2\"");
    const TrigPart part =
        which == "sin" ? TrigPart::sine : TrigPart::cosine;
    std::vector<SmoothFn> members;
    std::vector<std::string> labels;
    for (int k : ks) {
      TrigIntegralSpec ts{E, k, alpha, nu, xi};
      members.push_back(
          SmoothFn([ts, part](double y) { return cs_trig(ts, y, part); },
                   [ts, part](const Jet& seed) {
                     Jet at = cs_trig_jet(ts, seed.value(), seed.order(), part);
                     return compose(at, seed);
                   }));
      labels.push_back((which == "sin" ? "S_" : "C_") + std::to_string(k));
    }
    Interval domain = override_interval ? *override_interval
                                        : Interval(-1.0 + 1e-3, 1.0 - 1e-3);
    std::ostringstream id;
    id << "cs/" << which << "-alpha_" << alpha << "-nu_" << nu;
    return {FunctionFamily(members, domain, labels), id.str()};
  }
  throw UsageError("unknown family kind: " + kind);
}

}  // namespace chebmel
