#pragma once

#include <optional>
#include <vector>

#include "krylab/errors.hpp"

namespace krylab {

using Vector = std::vector<double>;

/// Pivot threshold shared by every elimination in this module: a pivot is
/// singular to working precision when its magnitude is at most
/// kSingularityTol times the largest candidate magnitude encountered so far.
inline constexpr double kSingularityTol = 1e-14;

/// Dense row-major matrix of doubles.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double &operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  Vector apply(const Vector &v) const;
  Vector apply_transpose(const Vector &v) const;
  DenseMatrix transposed() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool is_symmetric(double rtol = 1e-12) const;

  const std::vector<double> &data() const { return data_; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Plane rotation mixing rows (index, index+1).
struct GivensRotation {
  double c = 1.0;
  double s = 0.0;
  int index = -1;
};

struct GivensResult {
  GivensRotation rot;
  double r = 0.0;
};

/// Euclidean norm. Throws InvalidInputError on empty input or non-finite
/// entries. Two-pass scaling keeps it safe near the extremes of the range.
double norm2(const Vector &v);

double dot(const Vector &a, const Vector &b);

/// axpy: y += alpha * x.
void add_scaled(Vector &y, double alpha, const Vector &x);

/// Rotation with c*a + s*b = r and -s*a + c*b = 0. For (0,0) returns the
/// identity rotation with r = 0.
GivensResult givens(double a, double b);

/// Solves a square upper-Hessenberg system by elimination with the pivot
/// choice restricted to the two structurally nonzero candidates per column
/// (O(k^2)). Returns nullopt when H is singular to working precision.
std::optional<Vector> solve_hessenberg(const DenseMatrix &h, const Vector &rhs);

/// LU factorization with partial pivoting, P*A = L*U stored compactly.
class LuFactorization {
public:
  bool singular() const { return singular_; }
  int dim() const { return lu_.rows(); }

  /// Solves A x = rhs. Throws SingularMatrixError when the factorization
  /// flagged singularity.
  Vector solve(const Vector &rhs) const;
  /// Solves A^T x = rhs through the same factors.
  Vector solve_transpose(const Vector &rhs) const;

  /// Reconstructs P*A (for verification).
  DenseMatrix reconstruct_permuted() const;
  const std::vector<int> &permutation() const { return perm_; }

  friend LuFactorization lu_factor(const DenseMatrix &a);

private:
  DenseMatrix lu_;
  std::vector<int> perm_;
  bool singular_ = false;
};

LuFactorization lu_factor(const DenseMatrix &a);

/// Convenience wrapper: factor + solve. Throws SingularMatrixError.
Vector lu_solve(const DenseMatrix &a, const Vector &rhs);

struct EighResult {
  Vector eigenvalues;      // ascending
  DenseMatrix eigenvectors; // columns match eigenvalue order
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps until the
/// off-diagonal Frobenius norm drops below 1e-12 * ||A||_F (at most 100
/// sweeps). Throws InvalidInputError when A is not symmetric to 1e-12
/// relative in the max norm.
EighResult jacobi_eigh(const DenseMatrix &a);

/// Two-norm condition number estimate: power iteration on A^T A for the
/// largest singular value and inverse iteration through the LU factors for
/// the smallest, each run until the relative change of the estimate is at
/// most tol. Lower-bound biased; accuracy is governed by tol and by the
/// spectral gaps.
double cond2_estimate(const DenseMatrix &a, double tol);

} // namespace krylab
