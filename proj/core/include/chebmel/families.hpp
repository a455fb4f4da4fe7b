#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chebmel/interval.hpp"
#include "chebmel/quadrature.hpp"
#include "chebmel/smooth_fn.hpp"
#include "chebmel/wronskian.hpp"

namespace chebmel {

enum class TrigPart { cosine, sine };

/// Spec for the trigonometric integrals
///   C^E_k(y) = int_E xi(th) cos(k th) (1 - y cos(nu th))^(-alpha) dth
/// and the sin-k analog.
struct TrigIntegralSpec {
  Interval E;
  int k = 0;
  double alpha = 1.0;
  int nu = 1;
  SmoothFn xi = fn::constant(1.0);

  void validate() const;
};

double cs_trig(const TrigIntegralSpec& spec, double y, TrigPart part,
               double tol = kDefaultQuadTol);
Jet cs_trig_jet(const TrigIntegralSpec& spec, double y, int order,
                TrigPart part, double tol = kDefaultQuadTol);

/// Spec for the sign-definite-denominator integrals
///   C^E_{k,alpha}(y) = int_E cos^k th / (y - cos th)^alpha dth
/// and the sin th cos^k th analog.
struct CSAlphaSpec {
  Interval E;
  int k = 0;
  double alpha = 1.0;
};

double cs_alpha(const CSAlphaSpec& spec, double y, TrigPart part,
                bool allow_unsafe = false, double tol = kDefaultQuadTol);
Jet cs_alpha_jet(const CSAlphaSpec& spec, double y, int order, TrigPart part,
                 double tol = kDefaultQuadTol);

/// The polynomial T^E_{kappa,q}(y): 0 for q = -1, otherwise the finite sum
/// sum_{i=1}^{q+1} C(q+1,i) (-1)^i y^{q+1-i} int_E sin^kappa th (y-cos th)^{i-1} dth.
/// The y-independent trigonometric moments behind the inner integrals are
/// cached per (E, kappa, index) under a mutex.
double t_polynomial(const Interval& E, int kappa, int q, double y);

/// Integer coefficients c_0..c_k with cos(k th) = sum c_i cos^i th.
std::vector<long long> chebpoly_expand(int k);

/// Dyadic coefficients w_0..w_j with cos^j th = sum w_k cos(k th).
std::vector<double> cospow_expand(int j);

enum class TrigFamilyKind {
  cos_full,     // {1, cos th, ..., cos m th}            on (0, pi)
  sin_full,     // {sin th, ..., sin m th}               on (0, pi)
  mixed_full,   // {1, cos th..cos m th, sin m th..sin th} on (0, pi)
  cos_parity,   // {cos k th, cos(k+2) th, ..., cos(k+2m) th}
  sin_parity,   // {sin(k+2l) th, ..., sin(k+2m) th}, l = (1+(-1)^k)/2
  mixed_parity  // cos block then descending sin block
};

TrigFamilyKind trig_kind_from_string(const std::string& s);
std::string to_string(TrigFamilyKind kind);

/// The ordered trigonometric families above. Parity kinds get the domain
/// (0, pi/2); use with_domain for the (pi/2, pi) copy.
FunctionFamily make_trig_family(TrigFamilyKind kind, int m, int k = 0);

/// {1,..,y^m0} followed by the blocks {(y+a_i)^beta, ..., y^{m_i}(y+a_i)^beta}
/// on (-a_n, +inf); m0 = -1 means no polynomial block. Admissibility
/// (beta not a nonnegative integer, beta < m0 - m1 + 1) is enforced unless
/// the spec is flagged as a negative test.
struct PowerFamilySpec {
  std::vector<double> a;  // strictly decreasing, positive
  std::vector<int> m;     // nonincreasing
  int m0 = -1;
  double beta = 0.5;
  bool negative_test = false;

  void validate() const;
};

FunctionFamily make_power_family(const PowerFamilySpec& spec);

/// One piece of the general integral family: interval E_i, ordered weights
/// f_{i,0..m_i}, and the kernel G_i(t, y).
struct IntegralFamilyPiece {
  Interval E;
  std::vector<SmoothFn> weights;
  BivariateFn G;
};

struct IntegralFamilySpec {
  std::vector<IntegralFamilyPiece> pieces;
  Interval U;
  /// Set when every G_i is the restriction of one kernel on a common domain.
  std::optional<BivariateFn> common_kernel;
  std::optional<Interval> common_domain;

  int piece_weight_count(int i) const;
  int member_count() const;
};

/// I^(deriv)_{i,j}(y) = int_{E_i} f_{i,j}(t) d_y^deriv G_i(t, y) dt,
/// the y-derivatives taken by jets under the integral.
double eval_integral_family(const IntegralFamilySpec& spec, int i, int j,
                            double y, int deriv, double tol = kDefaultQuadTol);

/// The members I_{i,j} of the family as jet-evaluable functions of y,
/// in the order (0,0), ..., (0,m_0), (1,0), ...
FunctionFamily integral_family_functions(const IntegralFamilySpec& spec,
                                         double tol = kDefaultQuadTol);

/// The family {int_E g^j (1-y g)^(-alpha) dt ; j = 0..m} as an
/// IntegralFamilySpec with the common power kernel recorded.
IntegralFamilySpec power_kernel_family(const SmoothFn& g, double alpha,
                                       const Interval& E, const Interval& U,
                                       int m);

/// A family described by the structured-text mini-language, e.g.
/// {"kind":"trig","variant":"mixed-full","m":3} or
/// {"kind":"power","a":[4,1],"m":[3,0],"m0":-1,"beta":1.5}.
struct ParsedFamily {
  FunctionFamily family;
  std::string id;
};

ParsedFamily parse_family(const std::string& json_text);

}  // namespace chebmel
