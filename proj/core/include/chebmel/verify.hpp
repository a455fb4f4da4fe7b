#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chebmel/families.hpp"
#include "chebmel/matrix.hpp"
#include "chebmel/wronskian.hpp"

namespace chebmel {

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct Witness {
  std::vector<double> point;  // grid point or node tuple
  double value = 0.0;
};

/// Sampled-sign evidence for one Wronskian (or one hypothesis prefix).
/// pass: uniform sign, with every certified sample above threshold; on
/// ordered grids, below-threshold samples are tolerated only in contiguous
/// runs touching the domain ends (analytic Wronskians of open-interval
/// families may vanish at the closure). min_abs is reported over the
/// certified region. fail carries witnesses: two samples of opposite sign.
/// inconclusive: nothing above threshold, or an interior near-zero dip.
struct SignCertificate {
  Verdict verdict = Verdict::inconclusive;
  long grid_points = 0;
  double min_abs = 0.0;
  int sign = 0;  // +1 or -1 when verdict == pass
  double threshold = 0.0;
  double scale = 0.0;
  long boundary_decay_points = 0;
  std::uint64_t seed = 0;
  std::vector<Witness> witnesses;
  std::string note;
};

/// Aggregated per-prefix certificates of one ECT/CT check.
struct ChebCertificate {
  std::vector<SignCertificate> prefixes;
  Verdict verdict() const;
  /// Index of the first prefix that is not a pass, or -1.
  int first_bad_prefix() const;
};

inline constexpr double kSignThresholdFactor = 1e-9;
inline constexpr double kBoundaryMarginFactor = 1e-6;

/// Sign-constancy of every prefix continuous Wronskian on a grid of grid_n
/// points plus 3-level refinement around the minimum.
ChebCertificate check_ect(const FunctionFamily& fam, int grid_n = 512);

/// Sign-constancy of every prefix discrete Wronskian on tuples_n stratified
/// random strictly-ordered node tuples per prefix.
ChebCertificate check_ct(const FunctionFamily& fam, int tuples_n = 256,
                         std::uint64_t seed = 12345);

/// One prefix selection of the product-of-determinants hypothesis: s pieces
/// with per-piece prefix depths k[0..s].
struct HypothesisPrefix {
  int s = 0;
  std::vector<int> k;
};

struct HypothesisHReport {
  std::vector<std::pair<HypothesisPrefix, SignCertificate>> prefixes;
  Verdict verdict() const;
};

/// Samples the product
///   prod_i D[f_{i,0..k_i}; nodes_i] * W[G_0(t_{0,0},.),...,G_s(t_{s,k_s},.)](y)
/// over E_0^{k_0+1} x ... x E_s^{k_s+1} x U by stratified Latin-hypercube
/// draws, for every prefix selection. Near-zero samples are allowed; a pass
/// needs a uniform sign among samples above threshold and a nonzero max.
HypothesisHReport check_hypothesis_H(const IntegralFamilySpec& spec,
                                     int samples = 4096,
                                     std::uint64_t seed = 12345);

/// Residual of the determinant-integration identity
///   det(int_{V_j} phi_{i,j}) = int...int det(phi_{i,j}(t_j)) dV,
/// relative to max(1, |lhs|). Square size <= 3.
double verify_lemma_2_6(const std::vector<std::vector<SmoothFn>>& phis,
                        const std::vector<Interval>& Vs,
                        double tol = 1e-9);

struct Prop2Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Both sides of the Wronskian-of-integrals formula for one prefix
/// selection: lhs by jets-in-y of quadrature values, rhs by the
/// product-domain integral of prod D * W divided by prod (k_i+1)!.
Prop2Result verify_prop2(const IntegralFamilySpec& spec, double y,
                         const HypothesisPrefix& prefix, double tol = 1e-8);

/// Generators sampled on a shared grid for span comparison.
struct SpanBasis {
  FunctionFamily generators;
  std::vector<double> sample_grid;

  void validate() const;  // grid size >= 4 x generator count
};

struct SpanReport {
  bool equal = false;
  int rank_a = 0;
  int rank_b = 0;
  int rank_union = 0;
};

/// Numerical span equality: rank(A) == rank(B) == rank(A u B) with ranks by
/// singular-value threshold tol * sigma_max (columns sup-normalized first).
SpanReport span_equal(const SpanBasis& a, const SpanBasis& b,
                      double tol = 1e-8);

/// Same comparison on raw evaluation matrices (columns = generators); used
/// for generators of several variables flattened over a grid.
SpanReport span_equal_samples(const RealMatrix& a, const RealMatrix& b,
                              double tol = 1e-8);

struct Theorem2Report {
  std::vector<ChebCertificate> h1;  // one per piece
  ChebCertificate h2;
  Verdict verdict() const;
};

/// (H.1): each piece's weight family is CT on its E_i. (H.2): the kernel
/// derivative family {G, d_y G, ..., d_y^M G} is CT in t on the common
/// domain at sampled y in U, M = Card(F) - 1. Requires a common kernel.
Theorem2Report check_theorem2(const IntegralFamilySpec& spec, int grid = 256,
                              std::uint64_t seed = 12345);

}  // namespace chebmel
