#include "krylab/matfunc.hpp"

#include <cmath>
#include <numbers>

namespace krylab {

FunctionSpec FunctionSpec::reciprocal() { return {}; }

FunctionSpec FunctionSpec::inverse_sqrt(double lambda_min, double lambda_max, int quad_nodes) {
  FunctionSpec f;
  f.kind = Kind::InverseSqrt;
  f.quad_nodes = quad_nodes;
  f.lambda_min = lambda_min;
  f.lambda_max = lambda_max;
  return f;
}

void gauss_legendre(int m, std::vector<double> &nodes, std::vector<double> &weights) {
  if (m < 1) throw InvalidInputError("gauss_legendre: m must be >= 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  // Newton on P_m from the Chebyshev-like initial guess; symmetric pairs.
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) nodes[m / 2] = 0.0;
}

double Quadrature::evaluate(double t) const {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    acc += static_cast<long double>(weights[i]) / (t - shifts[i]);
  }
  return static_cast<double>(acc);
}

Quadrature make_invsqrt_quadrature(int m, double lambda_min, double lambda_max) {
  if (!(lambda_min > 0.0)) throw InvalidInputError("invsqrt quadrature: lambda_min must be positive");
  if (lambda_max < lambda_min) throw InvalidInputError("invsqrt quadrature: lambda_max < lambda_min");
  if (m < 1) throw InvalidInputError("invsqrt quadrature: m must be >= 1");

  std::vector<double> x, w;
  gauss_legendre(m, x, w);

  Quadrature q;
  q.lambda_min = lambda_min;
  q.lambda_max = lambda_max;
  q.shifts.resize(m);
  q.weights.resize(m);
  const double sqrt_lmin = std::sqrt(lambda_min);
  for (int i = 0; i < m; ++i) {
    const double phi = (x[i] + 1.0) * std::numbers::pi / 4.0; // [0, pi/2]
    const double scale = w[i] * std::numbers::pi / 4.0;
    const double tan_phi = std::tan(phi);
    const double sec2 = 1.0 + tan_phi * tan_phi;
    q.shifts[i] = -lambda_min * tan_phi * tan_phi;
    q.weights[i] = scale * (2.0 / std::numbers::pi) * sqrt_lmin * sec2;
  }

  // Scalar certification on a log-spaced grid across the declared interval.
  const int grid = 257;
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = lambda_min * std::pow(lambda_max / lambda_min, static_cast<double>(i) / (grid - 1));
    const double exact = 1.0 / std::sqrt(t);
    worst = std::max(worst, std::abs(q.evaluate(t) - exact) / exact);
  }
  q.certified_rel_error = worst;
  return q;
}

namespace {

Vector shifted_hessenberg_e1_solve(const DenseMatrix &hk, double shift) {
  DenseMatrix h = hk;
  for (int i = 0; i < h.rows(); ++i) h(i, i) -= shift;
  Vector e1(h.rows(), 0.0);
  e1[0] = 1.0;
  const std::optional<Vector> y = solve_hessenberg(h, e1);
  if (!y) throw SingularMatrixError("arnoldi_fa: shifted Hessenberg system is singular");
  return *y;
}

} // namespace

Vector arnoldi_fa(const ArnoldiDecomposition &dec, int k, const FunctionSpec &f) {
  if (k < 1 || k > dec.steps()) throw InvalidInputError("arnoldi_fa: k out of range");

  if (f.kind == FunctionSpec::Kind::Reciprocal) {
    const std::optional<Vector> x = fom_solution(dec, k);
    if (!x) throw SingularMatrixError("arnoldi_fa: H_k is singular");
    return *x;
  }

  const Quadrature q = make_invsqrt_quadrature(f.quad_nodes, f.lambda_min, f.lambda_max);
  const DenseMatrix hk = dec.hessenberg_square(k);
  Vector y(k, 0.0);
  for (std::size_t i = 0; i < q.shifts.size(); ++i) {
    const Vector yi = shifted_hessenberg_e1_solve(hk, q.shifts[i]);
    add_scaled(y, q.weights[i], yi);
  }
  Vector x(dec.dim(), 0.0);
  for (int j = 0; j < k; ++j) add_scaled(x, dec.beta() * y[j], dec.basis()[j]);
  return x;
}

Vector reference_fab(const LinearOperator &a, const Vector &b, const FunctionSpec &f) {
  if (static_cast<int>(b.size()) != a.dim()) throw InvalidInputError("reference_fab: dimension mismatch");

  if (f.kind == FunctionSpec::Kind::Reciprocal) {
    return lu_solve(a.to_dense(), b);
  }

  const DenseMatrix ad = a.to_dense();
  if (!ad.is_symmetric()) {
    throw InvalidInputError("reference_fab: inverse square root requires a symmetric operator");
  }
  const EighResult eig = jacobi_eigh(ad);
  if (eig.eigenvalues.front() <= 0.0) {
    throw InvalidInputError("reference_fab: inverse square root requires positive definiteness");
  }
  const Vector vtb = eig.eigenvectors.apply_transpose(b);
  Vector scaled(vtb.size());
  for (std::size_t i = 0; i < vtb.size(); ++i) scaled[i] = vtb[i] / std::sqrt(eig.eigenvalues[i]);
  return eig.eigenvectors.apply(scaled);
}

MatFuncReport near_opt_report(const LinearOperator &a, const Vector &b, int k_max,
                              const FunctionSpec &f, ArnoldiOptions opts) {
  const Vector ref = reference_fab(a, b, f);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, k_max, opts);

  MatFuncReport rep;
  rep.ref_norm = norm2(ref);
  if (f.kind == FunctionSpec::Kind::InverseSqrt) {
    rep.quad_certified_rel_error =
        make_invsqrt_quadrature(f.quad_nodes, f.lambda_min, f.lambda_max).certified_rel_error;
  }

  const double cutoff = 1e-12 * rep.ref_norm;
  for (int k = 1; k <= dec.steps(); ++k) {
    MatFuncRow row;
    row.k = k;

    Vector diff = ref;
    const Vector x = arnoldi_fa(dec, k, f);
    add_scaled(diff, -1.0, x);
    row.fa_error = norm2(diff);

    // Orthogonal projection of the reference onto span(Q_k).
    Vector proj = ref;
    for (int j = 0; j < k; ++j) add_scaled(proj, -dot(dec.basis()[j], ref), dec.basis()[j]);
    row.best_error = norm2(proj);

    if (row.best_error > cutoff) row.ratio = row.fa_error / row.best_error;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

} // namespace krylab
