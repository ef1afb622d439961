#pragma once

#include <optional>
#include <vector>

#include "krylab/arnoldi.hpp"

namespace krylab {

/// Nonnegative residual norm with a distinguished INFINITE marker for the
/// iterations where the square Hessenberg matrix is singular and the FOM
/// iterate does not exist. The marker survives serialization (the CSV
/// token is "inf"), which a floating-point infinity would not do
/// unambiguously.
class ResidualNorm {
public:
  static ResidualNorm finite(double v);
  static ResidualNorm infinite();

  bool is_infinite() const { return infinite_; }
  /// Finite value; throws InvalidStateError on the INFINITE marker.
  double value() const;
  /// Finite value, or +inf for the marker (handy for comparisons).
  double numeric() const;

  bool operator==(const ResidualNorm &other) const = default;

private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Scalars theta_1, ..., theta_{k+1} from the Hessenberg recurrence
/// theta_{k+1} = -(1/h_{k+1,k}) sum_j theta_j h_{j,k}, theta_1 = 1.
/// A zero entry marks an iteration with singular H_k (infinite FOM
/// residual norm).
struct ThetaSequence {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool is_zero(std::size_t i) const { return values[i] == 0.0; }
};

/// Evaluates the recurrence from a (k+1) x k Hessenberg matrix. Throws
/// InvalidInputError when a subdiagonal entry inside the range is zero
/// (breakdown must truncate the matrix first).
ThetaSequence theta_sequence(const DenseMatrix &h);
ThetaSequence theta_sequence(const ArnoldiDecomposition &dec, int k);

struct ThetaNorms {
  std::vector<ResidualNorm> fom;  // ||r_k^F|| = beta / |theta_{k+1}|
  std::vector<double> gmres;      // ||r_k^G|| = beta (sum |theta_j|^2)^{-1/2}
};

ThetaNorms norms_from_theta(const ThetaSequence &theta, double beta);

/// ||r_k^G|| = (sum_{j<=k} 1/||r_j^F||^2)^{-1/2}, with 1/INFINITE = 0.
std::vector<double> gmres_from_fom(const std::vector<ResidualNorm> &fom_norms);

/// ||r_k^F|| = ||r_k^G|| / sqrt(1 - (||r_k^G||/||r_{k-1}^G||)^2); exact
/// stagnation maps to INFINITE. Throws InvalidInputError if the input
/// increases.
std::vector<ResidualNorm> fom_from_gmres(const std::vector<double> &gmres_norms);

struct FomResult {
  /// Iterate; empty when H_k is singular to working precision.
  Vector x;
  /// ||b - A x|| recomputed explicitly (INFINITE when x is undefined).
  ResidualNorm direct;
  /// beta * h_{k+1,k} * |last entry of y|, the Arnoldi identity value.
  ResidualNorm estimate;
};

FomResult fom_iterate(const ArnoldiDecomposition &dec, const LinearOperator &a, int k);

struct GmresResult {
  Vector x;
  /// ||b - A x|| recomputed explicitly.
  double direct = 0.0;
  /// |last entry of the rotated right-hand side| from the progressive QR.
  double givens = 0.0;
};

GmresResult gmres_iterate(const ArnoldiDecomposition &dec, const LinearOperator &a, int k);

/// The Galerkin solve behind both fom_iterate and reciprocal Arnoldi-FA:
/// x = beta * Q_k * y with H_k y = e_1. Nullopt when H_k is singular.
std::optional<Vector> fom_solution(const ArnoldiDecomposition &dec, int k);

struct HistoryRecord {
  int k = 0;
  ResidualNorm fom_direct;
  ResidualNorm fom_theta;
  double gmres_direct = 0.0;
  double gmres_theta = 0.0;
  ResidualNorm fom_error;   // meaningful only when the history carries errors
  double gmres_error = 0.0;
};

/// Per-iteration record of FOM and GMRES residual norms, each computed
/// both directly (||b - A x||) and through the theta recurrence; the
/// direct value is the canonical one. Optionally carries error norms
/// against a dense LU reference solution.
struct ConvergenceHistory {
  double beta = 0.0;
  bool with_errors = false;
  double ref_norm = 0.0; // ||A^{-1} b|| when with_errors
  bool breakdown = false;
  std::vector<HistoryRecord> records; // index = iteration k, starting at 0

  int iterations() const { return static_cast<int>(records.size()) - 1; }
};

ConvergenceHistory run_history(const LinearOperator &a, const Vector &b, int k_max,
                               bool with_errors = false, ArnoldiOptions opts = {});

struct IdentityDeviation {
  double fom = 0.0;   // max |direct - theta| / beta over finite records
  double gmres = 0.0; // max |direct - theta| / direct
};

/// Worst disagreement between the direct and the recurrence-based norms,
/// over the records whose direct GMRES norm is at least window_rtol * beta.
IdentityDeviation max_identity_deviation(const ConvergenceHistory &h, double window_rtol = 1e-10);

} // namespace krylab
