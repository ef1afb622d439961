#pragma once

#include <vector>

#include "krylab/linalg.hpp"
#include "krylab/operators.hpp"

namespace krylab {

struct ArnoldiOptions {
  /// Run one full extra modified-Gram-Schmidt pass per step (default on).
  bool reorthogonalize = true;
  /// Breakdown when h_{k+1,k} <= breakdown_rtol * max_j ||A q_j|| seen so far.
  double breakdown_rtol = 1e-12;
};

/// Orthonormal Krylov basis Q and upper-Hessenberg coefficient matrix H
/// with A Q_k = Q_{k+1} H_{k+1,k}, grown one modified-Gram-Schmidt step at
/// a time. Subdiagonal entries are the norms of the orthogonalized vectors
/// and therefore nonnegative.
class ArnoldiDecomposition {
public:
  static ArnoldiDecomposition start(const LinearOperator &a, const Vector &b, ArnoldiOptions opts = {});

  /// One Arnoldi step. On breakdown (invariant subspace found) the step's
  /// H column is recorded, no basis vector is appended, and further calls
  /// throw InvalidStateError.
  void extend(const LinearOperator &a);

  int dim() const { return n_; }
  /// Number of completed H columns; iterates exist for 1 <= k <= steps().
  int steps() const { return static_cast<int>(hcols_.size()); }
  double beta() const { return beta_; }
  bool breakdown() const { return breakdown_; }
  /// Step at which breakdown fired, or -1.
  int breakdown_step() const { return breakdown_step_; }
  const ArnoldiOptions &options() const { return opts_; }

  const std::vector<Vector> &basis() const { return q_; }
  int basis_size() const { return static_cast<int>(q_.size()); }

  /// H entry, zero-based; zero outside the stored Hessenberg profile.
  double h(int i, int j) const;
  /// Leading (k+1) x k block of H (rows past the matrix dimension are zero).
  DenseMatrix hessenberg(int k) const;
  /// Leading k x k block (last row deleted).
  DenseMatrix hessenberg_square(int k) const;

  /// The right-hand side the decomposition was started from, beta * q_1.
  Vector rhs() const;

  /// max |Q^T Q - I| over all stored basis vectors.
  double orthogonality_defect() const;
  /// ||A Q_k - Q_{k+1} H_{k+1,k}||_F for k = steps().
  double relation_residual(const LinearOperator &a) const;

private:
  ArnoldiDecomposition() = default;

  int n_ = 0;
  double beta_ = 0.0;
  bool breakdown_ = false;
  int breakdown_step_ = -1;
  double max_aq_norm_ = 0.0;
  ArnoldiOptions opts_;
  std::vector<Vector> q_;
  std::vector<std::vector<double>> hcols_; // column j holds h_{1..j+2, j+1}
};

/// Batch driver: start + extend until k_max columns or breakdown.
ArnoldiDecomposition arnoldi_run(const LinearOperator &a, const Vector &b, int k_max,
                                 ArnoldiOptions opts = {});

} // namespace krylab
