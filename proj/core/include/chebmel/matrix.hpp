#pragma once

#include <vector>

#include "chebmel/errors.hpp"

namespace chebmel {

/// Dense row-major real matrix. Carrier for Wronskian, evaluation, and Gram
/// matrices; everything here stays small (family sizes are capped at 12).
struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;

  RealMatrix() = default;
  RealMatrix(int r, int c);
  static RealMatrix from_rows(const std::vector<std::vector<double>>& rows);

  double& at(int i, int j) {
    return entries[static_cast<std::size_t>(i) * cols + j];
  }
  double at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * cols + j];
  }

  double frobenius_norm() const;
};

/// Determinant by row reduction with partial pivoting. Each row is first
/// divided by its max absolute entry (determinant rescaled accordingly), so
/// an exact zero pivot means an exactly singular matrix. Square, dim <= 12.
double det(const RealMatrix& m);

/// For m with rows == cols - 1 and full row rank: unit-norm v with
/// ||m v|| <= 1e-10 ||m||_F. Householder QR of the transpose.
std::vector<double> null_vector(const RealMatrix& m);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const RealMatrix& m);

/// Numerical rank: number of singular values above rel_tol * sigma_max.
int numerical_rank(const RealMatrix& m, double rel_tol);

struct LstsqResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  int rank = 0;
};

/// Minimum-norm least squares via one-sided Jacobi SVD; singular values below
/// rcond * sigma_max are truncated.
LstsqResult lstsq_svd(const RealMatrix& a, const std::vector<double>& b,
                      double rcond = 1e-12);

std::vector<double> mat_vec(const RealMatrix& m, const std::vector<double>& v);

}  // namespace chebmel
