#include "chebmel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "chebmel/parallel.hpp"
#include "chebmel/quadrature.hpp"

namespace chebmel {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict ChebCertificate::verdict() const {
  Verdict out = Verdict::pass;
  for (const auto& c : prefixes) {
    if (c.verdict == Verdict::fail) return Verdict::fail;
    if (c.verdict == Verdict::inconclusive) out = Verdict::inconclusive;
  }
  return out;
}

int ChebCertificate::first_bad_prefix() const {
  for (std::size_t i = 0; i < prefixes.size(); ++i)
    if (prefixes[i].verdict != Verdict::pass) return static_cast<int>(i);
  return -1;
}

Verdict HypothesisHReport::verdict() const {
  Verdict out = Verdict::pass;
  for (const auto& [p, c] : prefixes) {
    if (c.verdict == Verdict::fail) return Verdict::fail;
    if (c.verdict == Verdict::inconclusive) out = Verdict::inconclusive;
  }
  return out;
}

namespace {

const char* kSamplingNote =
    "sampled-sign evidence: cannot distinguish measure-zero vanishing from a "
    "sign change across an unsampled region";

struct Sample {
  std::vector<double> point;
  double value;
};

enum class SignMode {
  ordered_interior,  // check_ect: decay runs touching the ends are allowed
  strict,            // check_ct: every tuple must clear the threshold
  lenient            // hypothesis (H): near-zero samples allowed anywhere
};

SignCertificate certify_signs(const std::vector<Sample>& samples,
                              SignMode mode, std::uint64_t seed) {
  SignCertificate cert;
  cert.seed = seed;
  cert.grid_points = static_cast<long>(samples.size());
  cert.note = kSamplingNote;
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.value));
  cert.scale = scale;
  cert.threshold = kSignThresholdFactor * scale;
  if (scale == 0.0) {
    cert.verdict = Verdict::inconclusive;
    return cert;
  }

  // Boundary decay runs (ordered grids only).
  std::size_t lo_run = 0, hi_run = samples.size();
  if (mode == SignMode::ordered_interior) {
    while (lo_run < samples.size() &&
           std::abs(samples[lo_run].value) <= cert.threshold)
      ++lo_run;
    while (hi_run > lo_run &&
           std::abs(samples[hi_run - 1].value) <= cert.threshold)
      --hi_run;
    cert.boundary_decay_points =
        static_cast<long>(lo_run + (samples.size() - hi_run));
  }

  const Sample* pos = nullptr;
  const Sample* neg = nullptr;
  const Sample* interior_dip = nullptr;
  double min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    const bool in_decay_run =
        mode == SignMode::ordered_interior && (i < lo_run || i >= hi_run);
    if (in_decay_run) continue;
    min_abs = std::min(min_abs, std::abs(s.value));
    if (std::abs(s.value) <= cert.threshold) {
      if (!interior_dip) interior_dip = &s;
      continue;
    }
    if (s.value > 0.0 && !pos) pos = &s;
    if (s.value < 0.0 && !neg) neg = &s;
  }
  cert.min_abs = std::isfinite(min_abs) ? min_abs : 0.0;

  if (pos && neg) {
    cert.verdict = Verdict::fail;
    cert.witnesses.push_back({pos->point, pos->value});
    cert.witnesses.push_back({neg->point, neg->value});
    return cert;
  }
  if (!pos && !neg) {
    cert.verdict = Verdict::inconclusive;
    return cert;
  }
  if (mode != SignMode::lenient && interior_dip) {
    cert.verdict = Verdict::inconclusive;
    cert.witnesses.push_back({interior_dip->point, interior_dip->value});
    return cert;
  }
  cert.verdict = Verdict::pass;
  cert.sign = pos ? 1 : -1;
  return cert;
}

std::pair<double, double> margins(const Interval& e) {
  const double m = kBoundaryMarginFactor * e.length();
  return {e.lo_open ? e.lo + m : e.lo, e.hi_open ? e.hi - m : e.hi};
}

}  // namespace

ChebCertificate check_ect(const FunctionFamily& fam, int grid_n) {
  if (grid_n < 8) throw UsageError("check_ect requires grid_n >= 8");
  if (!fam.domain().finite())
    throw UsageError("check_ect requires a finite domain; restrict it first");
  if (fam.size() > kMaxFamilySize)
    throw UsageError("check_ect supports families of size <= 12");
  const auto [lo, hi] = margins(fam.domain());

  ChebCertificate out;
  for (int k = 0; k < fam.size(); ++k) {
    const FunctionFamily pre = fam.prefix(k);
    // Midpoint grid: samples stay one half-step clear of the margins.
    std::vector<double> xs(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i)
      xs[static_cast<std::size_t>(i)] =
          lo + (hi - lo) * (i + 0.5) / static_cast<double>(grid_n);

    std::vector<double> vals(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      vals[i] = wronskian_continuous(pre, xs[i]);
    });

    // Three refinement levels around the interior minimum of |W| (boundary
    // decay runs are skipped: they are legitimate for open-interval families).
    for (int level = 0; level < 3; ++level) {
      double scale = 0.0;
      for (double v : vals) scale = std::max(scale, std::abs(v));
      const double thr = kSignThresholdFactor * scale;
      std::size_t b_lo = 0, b_hi = vals.size();
      while (b_lo < vals.size() && std::abs(vals[b_lo]) <= thr) ++b_lo;
      while (b_hi > b_lo && std::abs(vals[b_hi - 1]) <= thr) --b_hi;
      if (b_lo >= b_hi) break;
      std::size_t imin = b_lo;
      for (std::size_t i = b_lo; i < b_hi; ++i)
        if (std::abs(vals[i]) < std::abs(vals[imin])) imin = i;
      const double x0 = imin == 0 ? xs[0] : xs[imin - 1];
      const double x1 = imin + 1 == xs.size() ? xs.back() : xs[imin + 1];
      std::vector<double> extra;
      for (int i = 1; i <= 8; ++i) extra.push_back(x0 + (x1 - x0) * i / 9.0);
      std::vector<double> extra_vals(extra.size());
      parallel_for(extra.size(), [&](std::size_t i) {
        extra_vals[i] = wronskian_continuous(pre, extra[i]);
      });
      xs.insert(xs.end(), extra.begin(), extra.end());
      vals.insert(vals.end(), extra_vals.begin(), extra_vals.end());
      std::vector<std::size_t> order(xs.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
      std::vector<double> xs2(xs.size()), vals2(vals.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        xs2[i] = xs[order[i]];
        vals2[i] = vals[order[i]];
      }
      xs.swap(xs2);
      vals.swap(vals2);
    }

    std::vector<Sample> samples;
    samples.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      samples.push_back({{xs[i]}, vals[i]});

    // Prefer an adjacent sign-change pair as the witness.
    SignCertificate cert =
        certify_signs(samples, SignMode::ordered_interior, 0);
    if (cert.verdict == Verdict::fail) {
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double a = samples[i].value, b = samples[i + 1].value;
        if (std::abs(a) > cert.threshold && std::abs(b) > cert.threshold &&
            a * b < 0.0) {
          cert.witnesses.clear();
          cert.witnesses.push_back({samples[i].point, a});
          cert.witnesses.push_back({samples[i + 1].point, b});
          break;
        }
      }
    }
    out.prefixes.push_back(std::move(cert));
  }
  return out;
}

ChebCertificate check_ct(const FunctionFamily& fam, int tuples_n,
                         std::uint64_t seed) {
  if (tuples_n < 8) throw UsageError("check_ct requires tuples_n >= 8");
  if (!fam.domain().finite())
    throw UsageError("check_ct requires a finite domain; restrict it first");
  if (fam.size() > kMaxFamilySize)
    throw UsageError("check_ct supports families of size <= 12");
  const auto [lo, hi] = margins(fam.domain());

  ChebCertificate out;
  for (int k = 0; k < fam.size(); ++k) {
    const FunctionFamily pre = fam.prefix(k);
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k) * 7919u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> tuples(static_cast<std::size_t>(tuples_n));
    for (auto& tup : tuples) {
      tup.resize(static_cast<std::size_t>(k) + 1);
      // one node per stratum; strata are disjoint, so the tuple is ordered
      const double w = (hi - lo) / (k + 1);
      for (int j = 0; j <= k; ++j)
        tup[static_cast<std::size_t>(j)] = lo + w * (j + unit(rng));
    }
    std::vector<double> vals(tuples.size());
    parallel_for(tuples.size(), [&](std::size_t i) {
      vals[i] = wronskian_discrete(pre, tuples[i]);
    });
    std::vector<Sample> samples;
    samples.reserve(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i)
      samples.push_back({tuples[i], vals[i]});
    out.prefixes.push_back(certify_signs(samples, SignMode::strict, seed));
  }
  return out;
}

namespace {

// Continuous Wronskian in y of the functions y -> G_i(t_{i,j}, y) for the
// flattened node list; entry (l, col) = d_y^l G at the node.
double kernel_node_wronskian(const IntegralFamilySpec& spec,
                             const HypothesisPrefix& prefix,
                             const std::vector<std::vector<double>>& nodes,
                             double y) {
  int cols = 0;
  for (int i = 0; i <= prefix.s; ++i)
    cols += prefix.k[static_cast<std::size_t>(i)] + 1;
  RealMatrix w(cols, cols);
  int col = 0;
  for (int i = 0; i <= prefix.s; ++i) {
    const auto& piece = spec.pieces[static_cast<std::size_t>(i)];
    for (double t : nodes[static_cast<std::size_t>(i)]) {
      const Jet jet = piece.G.jet_second(t, y, cols - 1);
      for (int l = 0; l < cols; ++l) w.at(l, col) = jet.derivative(l);
      ++col;
    }
  }
  return det(w);
}

double hypothesis_product(const IntegralFamilySpec& spec,
                          const HypothesisPrefix& prefix,
                          const std::vector<std::vector<double>>& nodes,
                          double y) {
  double prod = 1.0;
  for (int i = 0; i <= prefix.s; ++i) {
    const auto& piece = spec.pieces[static_cast<std::size_t>(i)];
    const int ki = prefix.k[static_cast<std::size_t>(i)];
    std::vector<SmoothFn> members(piece.weights.begin(),
                                  piece.weights.begin() + ki + 1);
    FunctionFamily fam(members, piece.E);
    prod *= wronskian_discrete(fam, nodes[static_cast<std::size_t>(i)]);
  }
  return prod * kernel_node_wronskian(spec, prefix, nodes, y);
}

std::vector<HypothesisPrefix> enumerate_prefixes(const IntegralFamilySpec& spec) {
  std::vector<HypothesisPrefix> out;
  const int n = static_cast<int>(spec.pieces.size());
  for (int s = 0; s < n; ++s) {
    std::vector<int> k(static_cast<std::size_t>(s) + 1, 0);
    for (;;) {
      out.push_back({s, k});
      int pos = s;
      while (pos >= 0) {
        if (k[static_cast<std::size_t>(pos)] + 1 <
            spec.piece_weight_count(pos)) {
          ++k[static_cast<std::size_t>(pos)];
          for (int j = pos + 1; j <= s; ++j) k[static_cast<std::size_t>(j)] = 0;
          break;
        }
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return out;
}

// Stratified Latin-hypercube draw of `n` points in [0,1]^d.
std::vector<std::vector<double>> latin_hypercube(int n, int d,
                                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> pts(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int dim = 0; dim < d; ++dim) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i)
      pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim)] =
          (perm[static_cast<std::size_t>(i)] + unit(rng)) / n;
  }
  return pts;
}

}  // namespace

HypothesisHReport check_hypothesis_H(const IntegralFamilySpec& spec,
                                     int samples, std::uint64_t seed) {
  if (spec.pieces.empty()) throw UsageError("hypothesis check: empty family");
  if (samples < 16) throw UsageError("hypothesis check: samples >= 16");
  HypothesisHReport report;
  std::mt19937_64 rng(seed);

  for (const auto& prefix : enumerate_prefixes(spec)) {
    int d = 1;  // the y axis
    for (int i = 0; i <= prefix.s; ++i)
      d += prefix.k[static_cast<std::size_t>(i)] + 1;
    const auto unit_pts = latin_hypercube(samples, d, rng);

    std::vector<Sample> pts(static_cast<std::size_t>(samples));
    const auto [ulo, uhi] = margins(spec.U);
    parallel_for(pts.size(), [&](std::size_t idx) {
      const auto& u = unit_pts[idx];
      std::vector<std::vector<double>> nodes(
          static_cast<std::size_t>(prefix.s) + 1);
      int dim = 0;
      std::vector<double> flat;
      for (int i = 0; i <= prefix.s; ++i) {
        const auto [elo, ehi] =
            margins(spec.pieces[static_cast<std::size_t>(i)].E);
        const int ki = prefix.k[static_cast<std::size_t>(i)];
        for (int j = 0; j <= ki; ++j) {
          const double t =
              elo + (ehi - elo) * u[static_cast<std::size_t>(dim++)];
          nodes[static_cast<std::size_t>(i)].push_back(t);
          flat.push_back(t);
        }
      }
      const double y = ulo + (uhi - ulo) * u[static_cast<std::size_t>(dim)];
      flat.push_back(y);
      pts[idx] = {flat, hypothesis_product(spec, prefix, nodes, y)};
    });

    report.prefixes.emplace_back(
        prefix, certify_signs(pts, SignMode::lenient, seed));
  }
  return report;
}

double verify_lemma_2_6(const std::vector<std::vector<SmoothFn>>& phis,
                        const std::vector<Interval>& Vs, double tol) {
  const int n = static_cast<int>(phis.size());
  if (n == 0 || static_cast<int>(Vs.size()) != n)
    throw UsageError("verify_lemma_2_6: need square phi and matching intervals");
  for (const auto& row : phis)
    if (static_cast<int>(row.size()) != n)
      throw UsageError("verify_lemma_2_6: phi must be square");
  if (n > 3) throw UsageError("verify_lemma_2_6 supports size <= 3");

  RealMatrix lhs_m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const SmoothFn& f = phis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      lhs_m.at(i, j) =
          integrate([&f](double t) { return f(t); }, Vs[static_cast<std::size_t>(j)],
                    tol / 10.0)
              .value;
    }
  const double lhs = det(lhs_m);

  const double rhs =
      integrate_product(
          [&](const std::vector<double>& t) {
            RealMatrix m(n, n);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                m.at(i, j) = phis[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(j)](
                                     t[static_cast<std::size_t>(j)]);
            return det(m);
          },
          Vs, tol)
          .value;

  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

Prop2Result verify_prop2(const IntegralFamilySpec& spec, double y,
                         const HypothesisPrefix& prefix, double tol) {
  if (prefix.s < 0 || prefix.s >= static_cast<int>(spec.pieces.size()))
    throw UsageError("verify_prop2: prefix s out of range");
  if (static_cast<int>(prefix.k.size()) != prefix.s + 1)
    throw UsageError("verify_prop2: prefix depth list length mismatch");
  int total_dim = 0;
  for (int i = 0; i <= prefix.s; ++i) {
    const int ki = prefix.k[static_cast<std::size_t>(i)];
    if (ki < 0 || ki >= spec.piece_weight_count(i))
      throw UsageError("verify_prop2: prefix depth out of range");
    total_dim += ki + 1;
  }
  if (total_dim > 3)
    throw UsageError("verify_prop2 supports total dimension <= 3");

  // lhs: Wronskian in y of the selected members, entries by jet quadrature.
  RealMatrix w(total_dim, total_dim);
  int col = 0;
  for (int i = 0; i <= prefix.s; ++i) {
    const auto& piece = spec.pieces[static_cast<std::size_t>(i)];
    for (int j = 0; j <= prefix.k[static_cast<std::size_t>(i)]; ++j) {
      const SmoothFn& f = piece.weights[static_cast<std::size_t>(j)];
      const BivariateFn& G = piece.G;
      const Jet column = integrate_jet(
                             [&](double t) {
                               return G.jet_second(t, y, total_dim - 1) * f(t);
                             },
                             piece.E, tol / 10.0)
                             .value;
      for (int l = 0; l < total_dim; ++l) w.at(l, col) = column.derivative(l);
      ++col;
    }
  }
  const double lhs = det(w);

  // rhs: product-domain integral of prod D * W over the per-piece powers.
  std::vector<Interval> axes;
  for (int i = 0; i <= prefix.s; ++i)
    for (int j = 0; j <= prefix.k[static_cast<std::size_t>(i)]; ++j)
      axes.push_back(spec.pieces[static_cast<std::size_t>(i)].E);

  double factor = 1.0;
  for (int i = 0; i <= prefix.s; ++i) {
    double fact = 1.0;
    for (int v = 2; v <= prefix.k[static_cast<std::size_t>(i)] + 1; ++v)
      fact *= v;
    factor /= fact;
  }

  const double integral =
      integrate_product(
          [&](const std::vector<double>& t) {
            std::vector<std::vector<double>> nodes(
                static_cast<std::size_t>(prefix.s) + 1);
            int dim = 0;
            for (int i = 0; i <= prefix.s; ++i)
              for (int j = 0; j <= prefix.k[static_cast<std::size_t>(i)]; ++j)
                nodes[static_cast<std::size_t>(i)].push_back(
                    t[static_cast<std::size_t>(dim++)]);
            return hypothesis_product(spec, prefix, nodes, y);
          },
          axes, tol)
          .value;

  Prop2Result out;
  out.lhs = lhs;
  out.rhs = factor * integral;
  out.residual = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
  return out;
}

void SpanBasis::validate() const {
  if (sample_grid.size() <
      4 * static_cast<std::size_t>(generators.size()))
    throw UsageError("span basis: grid must have >= 4x generator count");
}

namespace {

RealMatrix evaluation_matrix(const FunctionFamily& fam,
                             const std::vector<double>& grid) {
  RealMatrix m(static_cast<int>(grid.size()), fam.size());
  for (int j = 0; j < fam.size(); ++j)
    for (int i = 0; i < m.rows; ++i)
      m.at(i, j) = fam.member(j)(grid[static_cast<std::size_t>(i)]);
  return m;
}

void normalize_columns(RealMatrix& m) {
  for (int j = 0; j < m.cols; ++j) {
    double sup = 0.0;
    for (int i = 0; i < m.rows; ++i) sup = std::max(sup, std::abs(m.at(i, j)));
    if (sup == 0.0) continue;
    for (int i = 0; i < m.rows; ++i) m.at(i, j) /= sup;
  }
}

RealMatrix concat_columns(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows != b.rows) throw UsageError("span matrices need a shared grid");
  RealMatrix u(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) u.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols; ++j) u.at(i, a.cols + j) = b.at(i, j);
  }
  return u;
}

}  // namespace

SpanReport span_equal_samples(const RealMatrix& a, const RealMatrix& b,
                              double tol) {
  RealMatrix an = a, bn = b;
  normalize_columns(an);
  normalize_columns(bn);
  const RealMatrix un = concat_columns(an, bn);
  SpanReport r;
  r.rank_a = numerical_rank(an, tol);
  r.rank_b = numerical_rank(bn, tol);
  r.rank_union = numerical_rank(un, tol);
  r.equal = r.rank_a == r.rank_b && r.rank_b == r.rank_union;
  return r;
}

SpanReport span_equal(const SpanBasis& a, const SpanBasis& b, double tol) {
  a.validate();
  b.validate();
  if (a.sample_grid != b.sample_grid)
    throw UsageError("span_equal requires a shared sample grid");
  return span_equal_samples(evaluation_matrix(a.generators, a.sample_grid),
                            evaluation_matrix(b.generators, b.sample_grid),
                            tol);
}

Verdict Theorem2Report::verdict() const {
  Verdict out = h2.verdict();
  for (const auto& c : h1) {
    if (c.verdict() == Verdict::fail) return Verdict::fail;
    if (c.verdict() == Verdict::inconclusive) out = Verdict::inconclusive;
  }
  return out;
}

Theorem2Report check_theorem2(const IntegralFamilySpec& spec, int grid,
                              std::uint64_t seed) {
  if (!spec.common_kernel || !spec.common_domain)
    throw UsageError("check_theorem2 requires a common kernel and domain");
  Theorem2Report report;
  for (const auto& piece : spec.pieces)
    report.h1.push_back(
        check_ct(FunctionFamily(piece.weights, piece.E), grid, seed));

  const int M = spec.member_count() - 1;
  const BivariateFn G = *spec.common_kernel;
  const auto [ulo, uhi] = margins(spec.U);
  bool have_h2 = false;
  for (int q = 0; q < 5; ++q) {
    const double y = ulo + (uhi - ulo) * (q + 0.5) / 5.0;
    std::vector<SmoothFn> members;
    for (int j = 0; j <= M; ++j) {
      members.push_back(SmoothFn(
          [G, y, j](double t) { return G.jet_second(t, y, j).derivative(j); },
          [G, y, j](const Jet& seed_jet) {
            if (seed_jet.order() != 0)
              throw UsageError(
                  "kernel derivative family supports value evaluation only");
            return Jet::constant(
                G.jet_second(seed_jet.value(), y, j).derivative(j),
                seed_jet.base_point(), 0);
          }));
    }
    ChebCertificate cert = check_ct(
        FunctionFamily(members, *spec.common_domain), grid, seed + 17u * q);
    if (!have_h2 || cert.verdict() == Verdict::fail ||
        (cert.verdict() == Verdict::inconclusive &&
         report.h2.verdict() == Verdict::pass)) {
      report.h2 = cert;
      have_h2 = true;
    }
    if (report.h2.verdict() == Verdict::fail) break;
  }
  return report;
}

}  // namespace chebmel
