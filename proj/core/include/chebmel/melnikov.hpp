#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chebmel/families.hpp"
#include "chebmel/smooth_fn.hpp"
#include "chebmel/zeros.hpp"

namespace chebmel {

/// One-dimensional periodic equation dx/dt = -H_t/H_x + eps L(t,x) with a
/// piecewise-defined perturbation: sector_bounds = -pi = s_0 < ... < s_k = pi
/// and sector_terms[i] = L_i on [s_i, s_{i+1}). H must be jet-evaluable in x;
/// unperturbed(t, rho) is the periodic solution with value rho at t = -pi.
struct MelnikovEquationSpec {
  BivariateFn H;
  std::vector<double> sector_bounds;
  std::vector<std::function<double(double, double)>> sector_terms;
  std::function<double(double, double)> unperturbed;

  void validate() const;
};

/// Sector-wise quadrature of H_x(t, x0) L_i(t, x0). Checks that H is constant
/// along the unperturbed solution (first-integral sample check) first.
double m1_general(const MelnikovEquationSpec& spec, double rho,
                  double tol = 1e-10);

/// Perturbed rigid isochronous center of degree 2m: the first-order term in
/// the angular variable, parametrized by the reduced cosine coefficients.
struct System9Model {
  int m = 1;
  std::vector<double> lambda_hat;  // size m+1

  void validate() const;
};

enum class System9Path { direct, reduced };

double m1_system9(const System9Model& model, double rho, System9Path path,
                  double tol = 1e-10);
/// Jet-evaluable sweep function of rho on (0, 1).
SmoothFn m1_system9_fn(const System9Model& model, System9Path path,
                       double tol = 1e-10);

struct BivariatePoly {
  std::vector<std::vector<double>> coef;  // coef[i][j] multiplies x^i y^j

  int degree() const;
  double eval(double x, double y) const;
  Jet eval(const Jet& x, const Jet& y) const;
  bool is_zero() const;
};

/// Polynomial perturbation of the center with lines of singular points at
/// x = a_i, y = b_j; the annulus is 0 < rho < min(|a_i|, |b_j|).
struct System11Model {
  std::vector<double> a;  // nonzero, pairwise distinct
  std::vector<double> b;  // nonzero, pairwise distinct
  int m = 1;
  BivariatePoly P, Q;

  void validate() const;
  double rho_max() const;
};

double m1_system11(const System11Model& model, double rho, double tol = 1e-10);
SmoothFn m1_system11_fn(const System11Model& model, double tol = 1e-10);

/// Zero-count bound from the radical-set arithmetic:
/// Card(A) ([m/2] + l + 1) + [(m-1)/2] + l with A = {|a_i|} u {|b_j|},
/// l = Card({a_i^2 + b_j^2}).
int bound_system11(const System11Model& model);
/// Coarse form (n1+n2)([m/2] + n1 n2 + 1) + [(m-1)/2] + n1 n2.
int coarse_bound_system11(const System11Model& model);

/// Canonical index sets for the piecewise radial model coefficients.
std::vector<std::pair<int, int>> b1_indices(int m);
std::vector<std::pair<int, int>> b2_indices(int m);

struct SectorCoeffs {
  std::vector<double> c;  // over b1_indices(m)
  std::vector<double> d;  // over b2_indices(m)
};

/// Degree-m piecewise polynomial perturbation split by radial rays
/// radials[0] < ... < radials[n] in [-pi, pi); the last sector wraps through
/// +-pi. The annulus is 0 < rho < 1/|a|.
struct PiecewiseRadialModel {
  int m = 1;
  double a = 1.0;
  std::vector<double> radials;
  std::vector<SectorCoeffs> mu;  // one per sector

  void validate() const;
  int sector_count() const { return static_cast<int>(radials.size()); }
  double rho_max() const;
};

/// Sector intervals; the wrapping sector is split into its two pieces.
std::vector<std::vector<Interval>> sector_pieces(
    const std::vector<double>& radials);

/// C^E_{k,alpha} (or the sin variant) summed over the pieces of one sector,
/// as a jet-evaluable function of y.
SmoothFn cs_sector_fn(std::vector<Interval> pieces, int k, double alpha,
                      TrigPart part);

double m1_system10(const PiecewiseRadialModel& model, double rho,
                   double tol = 1e-10);
SmoothFn m1_system10_fn(const PiecewiseRadialModel& model, double tol = 1e-10);

/// Coordinates of y^{m-1} M1((a y)^{-1}) on the reduced basis
/// {1..y^{m-1}} u {C^{E_s}_{m+1-2p,1}} u {S^{E_s}_{m-2p,1}}, obtained by
/// least squares on a y-grid. The fit residual certifies membership.
struct ReducedCoefficients {
  int m = 1;
  double a = 1.0;
  std::vector<double> radials;
  std::vector<double> zeta;                 // m entries
  std::vector<std::vector<double>> eta;     // per sector, [ (m+1)/2 ] + 1
  std::vector<std::vector<double>> lambda;  // per sector, [ m/2 ] + 1
  double residual = 0.0;
};

ReducedCoefficients reduce_to_B2(const PiecewiseRadialModel& model,
                                 const std::vector<double>& y_grid,
                                 double fit_tol = 1e-6);

/// Reconstruction of the reduced form at y.
double reduced_value(const ReducedCoefficients& coeffs, double y);
SmoothFn reduced_fn(const ReducedCoefficients& coeffs);

/// Closed-form m-th derivative of the reduced form: the polynomial block
/// vanishes and every C/S picks up exponent m+1 and the factor (-1)^m m!.
double mth_derivative_reduced(const ReducedCoefficients& coeffs, double y);

enum class Prop8Case { i, ii, iii, iv, v, vi };

Prop8Case prop8_case_from_string(const std::string& s);
std::string to_string(Prop8Case c);

/// Default radial pattern of a case ((vi) has none).
std::vector<double> prop8_default_radials(Prop8Case c);

/// Zero-count bound for the piecewise radial system per case formula.
/// radials may be null for cases with a canonical pattern.
int prop8_bound(Prop8Case c, int m, const std::vector<double>* radials = nullptr);

/// The case's independent reduced basis as functions of y (a > 0 chart).
FunctionFamily prop8_reduced_basis(Prop8Case c, int m,
                                   const std::vector<double>& radials);

struct Prop8Report {
  Prop8Case case_id = Prop8Case::i;
  int m = 1;
  int bound = 0;
  int realized_count = -1;  // -1 when realization is not attempted (case vi)
  int max_random_count = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int card_theta = 0;
  ZeroReport realization;
};

/// Bound, a realized configuration with simple zeros meeting it (cases
/// (i)-(v)), and the maximum observed count over random coefficient draws.
Prop8Report prop8_analyze(Prop8Case c, int m,
                          const std::vector<double>* radials = nullptr,
                          int trials = 200, std::uint64_t seed = 20240817);

}  // namespace chebmel
