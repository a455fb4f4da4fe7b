#include "chebmel/zeros.hpp"

#include <algorithm>
#include <cmath>

#include "chebmel/matrix.hpp"
#include "chebmel/parallel.hpp"

namespace chebmel {

namespace {

constexpr double kPlateauFactor = 1e-7;   // candidate dip, relative to scale
constexpr double kAcceptFactor = 1e-9;    // |f| at an accepted zero
constexpr double kSignificantFactor = 1e-3;

struct Candidate {
  std::size_t index;
  bool sign_change;  // else plateau
};

double bisect(const SmoothFn& f, double a, double b, double fa, double fb,
              double tol) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= std::max(tol, 4e-16 * std::max(std::abs(a), std::abs(b))))
      return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  (void)fb;
  return 0.5 * (a + b);
}

// First derivative order whose scaled size is significant; h sets the
// length scale the zero was resolved at.
std::pair<int, bool> probe_multiplicity(const SmoothFn& f, double x, double h) {
  Jet jet(0.0, 0);
  try {
    jet = f.jet_at(x, kMultiplicityCap);
  } catch (const Error&) {
    return {1, false};
  }
  double c[kMultiplicityCap + 1];
  double fact = 1.0, hp = 1.0;
  double cmax = 0.0;
  for (int k = 0; k <= kMultiplicityCap; ++k) {
    if (k > 0) {
      fact *= k;
      hp *= h;
    }
    c[k] = std::abs(jet.derivative(k)) * hp / fact;
    if (k >= 1) cmax = std::max(cmax, c[k]);
  }
  if (cmax == 0.0) return {kMultiplicityCap, false};
  for (int k = 1; k <= kMultiplicityCap; ++k) {
    if (c[k] >= kSignificantFactor * cmax) {
      const bool strong = c[k] >= 0.1 * cmax;
      return {k, strong && k < kMultiplicityCap};
    }
  }
  return {kMultiplicityCap, false};
}

// Newton iteration on f' toward the local extremum nearest x0.
double refine_extremum(const SmoothFn& f, double x0, double lo, double hi) {
  double x = x0;
  for (int it = 0; it < 80; ++it) {
    Jet jet = f.jet_at(x, 2);
    const double d1 = jet.derivative(1), d2 = jet.derivative(2);
    if (d2 == 0.0) break;
    double step = d1 / d2;
    double nx = x - step;
    if (nx < lo) nx = 0.5 * (x + lo);
    if (nx > hi) nx = 0.5 * (x + hi);
    if (std::abs(nx - x) <= 1e-15 * (1.0 + std::abs(x))) {
      x = nx;
      break;
    }
    x = nx;
  }
  return x;
}

ZeroReport analyze(const std::vector<double>& grid,
                   const std::vector<double>& values, const SmoothFn* refine,
                   double tol) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw UsageError("zero scan needs matching grid/value arrays, size >= 2");
  ZeroReport report;
  report.scan_resolution = static_cast<int>(grid.size());

  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return report;  // flat below precision: nothing isolated

  const double h = (grid.back() - grid.front()) /
                   static_cast<double>(grid.size() - 1);

  std::vector<Candidate> candidates;
  std::vector<char> near_change(grid.size(), 0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 0.0 || values[i] * values[i + 1] < 0.0) {
      candidates.push_back({i, true});
      near_change[i] = near_change[i + 1] = 1;
      if (i > 0) near_change[i - 1] = 1;
      if (i + 2 < grid.size()) near_change[i + 2] = 1;
    }
  }
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (near_change[i]) continue;
    const double a = std::abs(values[i]);
    if (a < kPlateauFactor * scale && a <= std::abs(values[i - 1]) &&
        a <= std::abs(values[i + 1]))
      candidates.push_back({i, false});
  }

  if (candidates.size() > grid.size() / 8)
    throw ResolutionError(
        "zero scan found more candidates than the resolution supports; "
        "increase the resolution");

  for (const auto& cand : candidates) {
    ZeroRecord rec;
    if (cand.sign_change) {
      const std::size_t i = cand.index;
      if (values[i] == 0.0) {
        rec.location = grid[i];
        rec.bracket_lo = grid[i] - 0.5 * h;
        rec.bracket_hi = grid[i] + 0.5 * h;
        rec.residual = 0.0;
      } else if (refine) {
        const double loc =
            bisect(*refine, grid[i], grid[i + 1], values[i], values[i + 1], tol);
        rec.location = loc;
        rec.bracket_lo = std::max(grid[i], loc - std::max(tol, 1e-14));
        rec.bracket_hi = std::min(grid[i + 1], loc + std::max(tol, 1e-14));
        rec.residual = std::abs((*refine)(loc));
      } else {
        rec.location = 0.5 * (grid[i] + grid[i + 1]);
        rec.bracket_lo = grid[i];
        rec.bracket_hi = grid[i + 1];
        rec.residual = std::min(std::abs(values[i]), std::abs(values[i + 1]));
      }
      if (refine) {
        auto [mult, conf] = probe_multiplicity(*refine, rec.location, h);
        if (mult % 2 == 0) {
          // a sign change has odd multiplicity; an even probe is noise
          mult = 1;
          conf = false;
        }
        rec.multiplicity = mult;
        rec.confident = conf;
      } else {
        rec.multiplicity = 1;
        rec.confident = true;
      }
    } else {
      if (!refine) continue;  // count-only scans ignore plateaus
      const std::size_t i = cand.index;
      const double x =
          refine_extremum(*refine, grid[i], grid[i - 1], grid[i + 1]);
      const double fx = (*refine)(x);
      if (std::abs(fx) > kAcceptFactor * scale) continue;  // dip, not a zero
      rec.location = x;
      rec.bracket_lo = x - h;
      rec.bracket_hi = x + h;
      rec.residual = std::abs(fx);
      auto [mult, conf] = probe_multiplicity(*refine, x, h);
      rec.multiplicity = mult;
      rec.confident = conf;
    }
    report.zeros.push_back(rec);
  }

  std::sort(report.zeros.begin(), report.zeros.end(),
            [](const ZeroRecord& a, const ZeroRecord& b) {
              return a.location < b.location;
            });
  // Merge locations that collapsed to the same zero.
  std::vector<ZeroRecord> merged;
  for (const auto& rec : report.zeros) {
    if (!merged.empty() &&
        std::abs(rec.location - merged.back().location) <
            std::max(4.0 * tol, 1e-12)) {
      if (rec.residual < merged.back().residual) merged.back() = rec;
      continue;
    }
    merged.push_back(rec);
  }
  report.zeros = std::move(merged);

  report.total_with_multiplicity = 0;
  for (const auto& rec : report.zeros)
    report.total_with_multiplicity += rec.multiplicity;
  return report;
}

}  // namespace

ZeroReport count_zeros(const SmoothFn& f, const Interval& E, int resolution,
                       double tol) {
  if (resolution < 64) throw UsageError("count_zeros requires resolution >= 64");
  if (!E.finite()) throw UsageError("count_zeros requires a finite interval");
  std::vector<double> grid(static_cast<std::size_t>(resolution));
  std::vector<double> values(grid.size());
  const double len = E.length();
  for (int i = 0; i < resolution; ++i)
    grid[static_cast<std::size_t>(i)] =
        E.lo + len * (i + 0.5) / static_cast<double>(resolution);
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = f(grid[i]); });
  return analyze(grid, values, &f, tol);
}

ZeroReport count_zeros_from_samples(const std::vector<double>& grid,
                                    const std::vector<double>& values,
                                    const SmoothFn* refine, double tol) {
  return analyze(grid, values, refine, tol);
}

std::vector<double> realize_zeros(const FunctionFamily& fam,
                                  const std::vector<double>& targets) {
  const int n = fam.size() - 1;
  if (static_cast<int>(targets.size()) != n)
    throw UsageError("realize_zeros needs family size - 1 targets");
  for (std::size_t i = 0; i + 1 < targets.size(); ++i)
    if (!(targets[i] < targets[i + 1]))
      throw UsageError("realize_zeros targets must be strictly increasing");
  for (double t : targets)
    if (!fam.domain().contains(t))
      throw UsageError("realize_zeros target outside the family domain");

  RealMatrix m(n, n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j)
      m.at(i, j) = fam.member(j)(targets[static_cast<std::size_t>(i)]);

  // Column equilibration keeps mixed-scale families well conditioned.
  std::vector<double> col_scale(static_cast<std::size_t>(n) + 1, 1.0);
  for (int j = 0; j <= n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::abs(m.at(i, j)));
    if (s == 0.0) continue;
    col_scale[static_cast<std::size_t>(j)] = s;
    for (int i = 0; i < n; ++i) m.at(i, j) /= s;
  }

  std::vector<double> v = null_vector(m);
  double norm = 0.0;
  for (int j = 0; j <= n; ++j) {
    v[static_cast<std::size_t>(j)] /= col_scale[static_cast<std::size_t>(j)];
    norm += v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace chebmel
