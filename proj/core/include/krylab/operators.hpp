#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "krylab/linalg.hpp"

namespace krylab {

/// Square sparse matrix in compressed-sparse-row form. Column indices are
/// strictly increasing within each row and duplicates have been merged.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // length n+1, nondecreasing
  std::vector<int> col_idx;
  std::vector<double> values;

  Vector apply(const Vector &v) const;
  DenseMatrix to_dense() const;
  int nnz() const { return static_cast<int>(values.size()); }
};

/// Reads a Matrix Market file in "coordinate real general|symmetric" form.
/// The symmetric qualifier expands off-diagonal entries to both triangles;
/// duplicate coordinates are summed. Anything else in the header is an
/// UnsupportedFormatError; malformed content is a ParseError carrying the
/// line number.
CsrMatrix parse_matrix_market(std::istream &in);
CsrMatrix parse_matrix_market_file(const std::string &path);

struct SpectrumInterval {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

/// Union of closed real intervals, each carrying the number of equally
/// spaced eigenvalues (endpoints included) to place in it.
struct SpectrumSpec {
  std::vector<SpectrumInterval> intervals;
  int total() const;
};

/// The diagonal entries a SpectrumSpec describes: count m in [a,c] yields
/// a + i*(c-a)/(m-1); a single point lands on the midpoint.
Vector spectrum_points(const SpectrumSpec &spec);

/// A real linear operator of one of three kinds, with a dense
/// materialization available for reference computations.
class LinearOperator {
public:
  enum class Kind { Csr, Dense, Diagonal };

  static LinearOperator from_csr(CsrMatrix m);
  static LinearOperator from_dense(DenseMatrix m);
  static LinearOperator from_diagonal(Vector d);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }

  Vector apply(const Vector &v) const;
  DenseMatrix to_dense() const;

  /// Diagonal entries when kind() == Diagonal, nullptr otherwise.
  const Vector *diagonal() const;

private:
  LinearOperator() = default;
  Kind kind_ = Kind::Dense;
  int dim_ = 0;
  std::variant<CsrMatrix, DenseMatrix, Vector> rep_;
};

/// b - A*x accumulated in extended precision, so the reported residual is
/// the residual of the computed iterate rather than evaluation noise.
Vector residual_vector(const LinearOperator &a, const Vector &x, const Vector &b);

LinearOperator gen_spectrum_operator(const SpectrumSpec &spec);

/// Product of seeded Householder reflections; columns are orthonormal.
DenseMatrix random_orthogonal(int n, std::uint64_t seed, int reflections = 4);

struct RotatedSpectrum {
  LinearOperator op; // Q diag(spectrum) Q^T, dense
  DenseMatrix q;
};

/// Spectrum operator conjugated by a seeded orthogonal matrix; used to
/// check that residual histories are rotation invariant.
RotatedSpectrum gen_rotated_spectrum_operator(const SpectrumSpec &spec, std::uint64_t seed);

/// Instance with prescribed FOM residual norms: lower-bidiagonal A with
/// unit subdiagonal, b = f[0] * e_1. Running FOM yields ||r_j|| = f[j] for
/// j < n and an exact solve at step n.
struct PrescribedInstance {
  DenseMatrix a;
  Vector b;
  Vector targets; // f_0..f_{n-1}
  LinearOperator op() const;
};

PrescribedInstance build_prescribed_instance(const Vector &f);

Vector ones_vector(int n);
Vector unit_vector(int n, int index);

/// Seeded random sparse operator: off-diagonal pattern of the given density
/// with entries in [-1,1], diagonal shifted to keep the matrix comfortably
/// nonsingular.
LinearOperator random_sparse_operator(int n, double density, std::uint64_t seed);

/// Seeded dense operator with entries in [-1,1].
LinearOperator random_dense_operator(int n, std::uint64_t seed);

} // namespace krylab
