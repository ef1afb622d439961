#pragma once

#include <optional>
#include <vector>

#include "krylab/solvers.hpp"

namespace krylab {

/// Running minimum; INFINITE entries never decrease it.
std::vector<ResidualNorm> best_so_far(const std::vector<ResidualNorm> &seq);

struct BoundRow {
  int k = 0;
  ResidualNorm fom_best;          // min_{j<=k} ||r_j^F||
  double gmres = 0.0;             // ||r_k^G||
  double bound = 0.0;             // sqrt(k+1) * ||r_k^G||
  std::optional<double> ratio;    // fom_best / bound; absent in the converged tail
};

/// Per-iteration evaluation of min_{j<=k} ||r_j^F|| <= sqrt(k+1) ||r_k^G||,
/// from the directly computed norms. Iterations with GMRES residual below
/// exclude_rtol * beta are excluded from the ratio statistics (the
/// inequality is vacuous there).
struct BoundReport {
  std::vector<BoundRow> rows;
  double worst_ratio = 0.0;
  bool pass = false; // worst_ratio <= 1 + 1e-10
  double exclude_rtol = 0.0;
};

BoundReport check_main_bound(const ConvergenceHistory &h, double exclude_rtol = 1e-14);

struct SharpnessResult {
  PrescribedInstance instance;
  ConvergenceHistory history;
  BoundReport report;
};

/// The equality instance: all-ones prescribed residuals in dimension k+1.
/// Its bound ratio is exactly 1 at every iteration up to k.
SharpnessResult sharpness_instance(int k);

struct ErrorRow {
  int k = 0;
  ResidualNorm fom_err_best;
  double gmres_err = 0.0;
  double bound = 0.0; // sqrt(k+1) * kappa * gmres error
  std::optional<double> ratio;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  double kappa = 0.0;
  bool kappa_exact = false;
  double worst_ratio = 0.0;
  bool pass = false;
  double exclude_rtol = 0.0;
};

/// min_{j<=k} ||A^{-1}b - x_j^F|| <= sqrt(k+1) * kappa * ||A^{-1}b - x_k^G||,
/// evaluated with the supplied condition number (which must be an upper
/// bound for the inequality to be checkable). Throws InvalidInputError when
/// the history carries no error norms.
ErrorReport check_error_bound(const ConvergenceHistory &h, double kappa, double exclude_rtol = 1e-14);

struct KappaEstimate {
  double value = 0.0;
  bool exact = false;
};

/// Exact max|d|/min|d| for diagonal operators, cond2_estimate inflated by
/// a 1.01 safety factor otherwise.
KappaEstimate operator_kappa(const LinearOperator &a, double tol = 1e-10);

} // namespace krylab
