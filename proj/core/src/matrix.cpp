#include "chebmel/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace chebmel {

RealMatrix::RealMatrix(int r, int c) : rows(r), cols(c) {
  if (r < 0 || c < 0) throw UsageError("matrix dimensions must be nonnegative");
  entries.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0);
}

RealMatrix RealMatrix::from_rows(const std::vector<std::vector<double>>& rws) {
  if (rws.empty()) return RealMatrix(0, 0);
  RealMatrix m(static_cast<int>(rws.size()), static_cast<int>(rws[0].size()));
  for (int i = 0; i < m.rows; ++i) {
    if (static_cast<int>(rws[static_cast<std::size_t>(i)].size()) != m.cols)
      throw UsageError("ragged rows in matrix construction");
    for (int j = 0; j < m.cols; ++j)
      m.at(i, j) = rws[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

double RealMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : entries) s += v * v;
  return std::sqrt(s);
}

double det(const RealMatrix& m) {
  if (m.rows != m.cols) throw UsageError("det requires a square matrix");
  const int n = m.rows;
  if (n == 0) return 1.0;
  if (n > 12) throw UsageError("det supports dimension <= 12");

  RealMatrix a = m;
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    for (int j = 0; j < n; ++j) r = std::max(r, std::abs(a.at(i, j)));
    if (r == 0.0) return 0.0;
    for (int j = 0; j < n; ++j) a.at(i, j) /= r;
    scale *= r;
  }

  double sign = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a.at(i, col)) > std::abs(a.at(piv, col))) piv = i;
    if (a.at(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
      sign = -sign;
    }
    const double p = a.at(col, col);
    for (int i = col + 1; i < n; ++i) {
      const double f = a.at(i, col) / p;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a.at(i, j) -= f * a.at(col, j);
    }
  }
  double d = sign * scale;
  for (int i = 0; i < n; ++i) d *= a.at(i, i);
  return d;
}

namespace {

struct QrFactors {
  std::vector<double> tau;    // reflector scalars; reflector j in column j
  std::vector<double> rdiag;  // diagonal of R
};

// Householder QR of a (modified in place, m x n with m >= n).
QrFactors householder_qr(RealMatrix& a) {
  const int m = a.rows, n = a.cols;
  QrFactors f;
  f.tau.assign(static_cast<std::size_t>(n), 0.0);
  f.rdiag.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double norm = 0.0;
    for (int i = j; i < m; ++i) norm += a.at(i, j) * a.at(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = a.at(j, j) >= 0 ? -norm : norm;
    const double v0 = a.at(j, j) - alpha;
    double vnorm2 = v0 * v0;
    for (int i = j + 1; i < m; ++i) vnorm2 += a.at(i, j) * a.at(i, j);
    f.tau[static_cast<std::size_t>(j)] = 2.0 / vnorm2;
    f.rdiag[static_cast<std::size_t>(j)] = alpha;
    a.at(j, j) = v0;
    for (int c = j + 1; c < n; ++c) {
      double dot = 0.0;
      for (int i = j; i < m; ++i) dot += a.at(i, j) * a.at(i, c);
      dot *= f.tau[static_cast<std::size_t>(j)];
      for (int i = j; i < m; ++i) a.at(i, c) -= dot * a.at(i, j);
    }
  }
  return f;
}

}  // namespace

std::vector<double> null_vector(const RealMatrix& m) {
  if (m.cols != m.rows + 1)
    throw UsageError("null_vector requires rows == cols - 1");
  const int n = m.cols;
  const double mnorm = m.frobenius_norm();

  // QR of the transpose: columns of Q past the rank span the null space.
  RealMatrix a(n, n - 1);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) a.at(j, i) = m.at(i, j);

  const QrFactors f = householder_qr(a);
  double rmax = 0.0;
  for (double r : f.rdiag) rmax = std::max(rmax, std::abs(r));
  if (rmax == 0.0)
    throw DegenerateSystemError("null_vector: rank-deficient input");
  for (double r : f.rdiag)
    if (std::abs(r) < 1e-12 * rmax)
      throw DegenerateSystemError("null_vector: rank-deficient input");

  // v = Q e_{n-1}: apply reflectors in reverse order to the last unit vector.
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(n - 1)] = 1.0;
  for (int j = n - 2; j >= 0; --j) {
    const double t = f.tau[static_cast<std::size_t>(j)];
    if (t == 0.0) continue;
    double dot = 0.0;
    for (int i = j; i < n; ++i) dot += a.at(i, j) * v[static_cast<std::size_t>(i)];
    dot *= t;
    for (int i = j; i < n; ++i) v[static_cast<std::size_t>(i)] -= dot * a.at(i, j);
  }

  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;

  const auto res = mat_vec(m, v);
  double rnorm = 0.0;
  for (double x : res) rnorm += x * x;
  rnorm = std::sqrt(rnorm);
  if (rnorm > 1e-10 * std::max(mnorm, 1e-300))
    throw DegenerateSystemError("null_vector: residual above tolerance");
  return v;
}

namespace {

// One-sided Jacobi: orthogonalize the columns of a, optionally accumulating
// the right rotations into v (n x n, preinitialized to identity).
void jacobi_orthogonalize(RealMatrix& a, RealMatrix* v) {
  const int m = a.rows, n = a.cols;
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < m; ++i) {
          app += a.at(i, p) * a.at(i, p);
          aqq += a.at(i, q) * a.at(i, q);
          apq += a.at(i, p) * a.at(i, q);
        }
        if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < m; ++i) {
          const double ap = a.at(i, p), aq = a.at(i, q);
          a.at(i, p) = cs * ap - sn * aq;
          a.at(i, q) = sn * ap + cs * aq;
        }
        if (v) {
          for (int i = 0; i < n; ++i) {
            const double vp = v->at(i, p), vq = v->at(i, q);
            v->at(i, p) = cs * vp - sn * vq;
            v->at(i, q) = sn * vp + cs * vq;
          }
        }
      }
    }
    if (converged) break;
  }
}

}  // namespace

std::vector<double> singular_values(const RealMatrix& m) {
  RealMatrix a = m;
  if (a.rows < a.cols) {
    RealMatrix t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    a = t;
  }
  jacobi_orthogonalize(a, nullptr);
  std::vector<double> sv(static_cast<std::size_t>(a.cols), 0.0);
  for (int j = 0; j < a.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i) s += a.at(i, j) * a.at(i, j);
    sv[static_cast<std::size_t>(j)] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

int numerical_rank(const RealMatrix& m, double rel_tol) {
  const auto sv = singular_values(m);
  if (sv.empty() || sv[0] == 0.0) return 0;
  int r = 0;
  for (double s : sv)
    if (s > rel_tol * sv[0]) ++r;
  return r;
}

LstsqResult lstsq_svd(const RealMatrix& a, const std::vector<double>& b,
                      double rcond) {
  if (static_cast<int>(b.size()) != a.rows)
    throw UsageError("lstsq_svd: rhs length mismatch");
  RealMatrix u = a;
  RealMatrix v(a.cols, a.cols);
  for (int i = 0; i < a.cols; ++i) v.at(i, i) = 1.0;
  jacobi_orthogonalize(u, &v);

  std::vector<double> sigma(static_cast<std::size_t>(a.cols), 0.0);
  double smax = 0.0;
  for (int j = 0; j < a.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i) s += u.at(i, j) * u.at(i, j);
    sigma[static_cast<std::size_t>(j)] = std::sqrt(s);
    smax = std::max(smax, sigma[static_cast<std::size_t>(j)]);
  }

  LstsqResult out;
  out.x.assign(static_cast<std::size_t>(a.cols), 0.0);
  for (int j = 0; j < a.cols; ++j) {
    const double s = sigma[static_cast<std::size_t>(j)];
    if (s <= rcond * smax || s == 0.0) continue;
    ++out.rank;
    double coef = 0.0;  // (u_j . b) / sigma_j where u_j = col_j / sigma_j
    for (int i = 0; i < a.rows; ++i) coef += u.at(i, j) * b[static_cast<std::size_t>(i)];
    coef /= s * s;
    for (int i = 0; i < a.cols; ++i)
      out.x[static_cast<std::size_t>(i)] += coef * v.at(i, j);
  }

  const auto ax = mat_vec(a, out.x);
  double r = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = ax[i] - b[i];
    r += d * d;
  }
  out.residual_norm = std::sqrt(r);
  return out;
}

std::vector<double> mat_vec(const RealMatrix& m, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != m.cols)
    throw UsageError("mat_vec: dimension mismatch");
  std::vector<double> r(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

}  // namespace chebmel
