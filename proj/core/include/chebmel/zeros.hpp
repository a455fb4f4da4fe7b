#pragma once

#include <vector>

#include "chebmel/interval.hpp"
#include "chebmel/smooth_fn.hpp"
#include "chebmel/wronskian.hpp"

namespace chebmel {

struct ZeroRecord {
  double location = 0.0;
  int multiplicity = 1;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;
  /// False when the multiplicity probe was inconclusive or capped; a capped
  /// record with multiplicity 4 reads as "at least 4".
  bool confident = true;
};

struct ZeroReport {
  std::vector<ZeroRecord> zeros;
  int total_with_multiplicity = 0;
  int scan_resolution = 0;
};

inline constexpr int kDefaultScanResolution = 4096;
inline constexpr double kBisectionTol = 1e-12;
inline constexpr int kMultiplicityCap = 4;

/// Scan `resolution` midpoints of E, bisect sign changes to width tol, and
/// probe near-zero plateaus without a sign change by jet derivatives at the
/// local minimizer. Throws ResolutionError past resolution/8 candidates.
ZeroReport count_zeros(const SmoothFn& f, const Interval& E,
                       int resolution = kDefaultScanResolution,
                       double tol = kBisectionTol);

/// Same analysis on precomputed scan values over an increasing grid. When
/// `refine` is null, sign changes are reported at bracket midpoints without
/// bisection (used for bulk coefficient draws where only counts matter).
ZeroReport count_zeros_from_samples(const std::vector<double>& grid,
                                    const std::vector<double>& values,
                                    const SmoothFn* refine,
                                    double tol = kBisectionTol);

/// Coefficients c (unit norm) with sum c_j fam_j(target_i) = 0 at every
/// target; needs exactly size-1 strictly increasing targets inside the
/// domain. The combination's zero set should be re-checked by count_zeros.
std::vector<double> realize_zeros(const FunctionFamily& fam,
                                  const std::vector<double>& targets);

}  // namespace chebmel
