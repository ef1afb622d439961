#pragma once

#include <optional>
#include <vector>

#include "krylab/solvers.hpp"

namespace krylab {

/// Matrix function selector for Arnoldi-FA. The inverse square root is
/// realized through a quadrature over real nonpositive shifts, so the
/// caller declares the positive spectrum interval the rule must cover.
struct FunctionSpec {
  enum class Kind { Reciprocal, InverseSqrt };

  Kind kind = Kind::Reciprocal;
  int quad_nodes = 40;
  double lambda_min = 1.0;
  double lambda_max = 1.0;

  static FunctionSpec reciprocal();
  static FunctionSpec inverse_sqrt(double lambda_min, double lambda_max, int quad_nodes = 40);
};

/// Discretization of t^{-1/2} = (2/pi) * integral_0^inf (t + s^2)^{-1} ds
/// as sum_i w_i / (t - z_i) with shifts z_i = -s_i^2 <= 0. Built by
/// Gauss-Legendre after the substitution s = sqrt(lambda_min) tan(phi),
/// which turns the integrand into the smooth
/// (2/pi) sqrt(lambda_min) / (t cos^2 + lambda_min sin^2) on [0, pi/2].
struct Quadrature {
  std::vector<double> shifts;
  std::vector<double> weights;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Max relative error of evaluate(t) against t^{-1/2} on a grid spanning
  /// [lambda_min, lambda_max].
  double certified_rel_error = 0.0;

  double evaluate(double t) const;
};

Quadrature make_invsqrt_quadrature(int m, double lambda_min, double lambda_max);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int m, std::vector<double> &nodes, std::vector<double> &weights);

/// The Arnoldi-FA iterate beta * Q_k f(H_k) e_1. The reciprocal goes
/// through fom_solution (the identical arithmetic path as the FOM
/// iterate); the inverse square root sums shifted Hessenberg solves over
/// the quadrature. Throws SingularMatrixError if a (shifted) system is
/// singular to working precision.
Vector arnoldi_fa(const ArnoldiDecomposition &dec, int k, const FunctionSpec &f);

/// Reference f(A)b at desk scale: dense LU for the reciprocal, Jacobi
/// eigendecomposition for the inverse square root (A must be symmetric
/// positive definite).
Vector reference_fab(const LinearOperator &a, const Vector &b, const FunctionSpec &f);

struct MatFuncRow {
  int k = 0;
  double fa_error = 0.0;          // ||f(A)b - x_k||
  double best_error = 0.0;        // ||(I - Q_k Q_k^T) f(A)b||
  std::optional<double> ratio;    // fa_error / best_error; absent in the converged tail
};

struct MatFuncReport {
  std::vector<MatFuncRow> rows;
  double ref_norm = 0.0;
  double quad_certified_rel_error = 0.0; // 0 for the reciprocal
};

/// Per-iteration Arnoldi-FA error against the orthogonal projection of the
/// reference onto the Krylov basis (the Euclidean-optimal approximation
/// from the subspace).
MatFuncReport near_opt_report(const LinearOperator &a, const Vector &b, int k_max,
                              const FunctionSpec &f, ArnoldiOptions opts = {});

} // namespace krylab
