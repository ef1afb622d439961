#include "krylab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "krylab/rng.hpp"

namespace krylab {

DenseMatrix::DenseMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows <= 0 || cols <= 0) throw InvalidInputError("DenseMatrix: dimensions must be positive");
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector DenseMatrix::apply(const Vector &v) const {
  if (static_cast<int>(v.size()) != cols_) throw InvalidInputError("DenseMatrix::apply: dimension mismatch");
  Vector out(rows_);
  for (int i = 0; i < rows_; ++i) {
    long double acc = 0.0L;
    const double *row = data_.data() + static_cast<std::size_t>(i) * cols_;
    for (int j = 0; j < cols_; ++j) acc += static_cast<long double>(row[j]) * v[j];
    out[i] = static_cast<double>(acc);
  }
  return out;
}

Vector DenseMatrix::apply_transpose(const Vector &v) const {
  if (static_cast<int>(v.size()) != rows_) {
    throw InvalidInputError("DenseMatrix::apply_transpose: dimension mismatch");
  }
  std::vector<long double> acc(cols_, 0.0L);
  for (int i = 0; i < rows_; ++i) {
    const double *row = data_.data() + static_cast<std::size_t>(i) * cols_;
    for (int j = 0; j < cols_; ++j) acc[j] += static_cast<long double>(row[j]) * v[i];
  }
  Vector out(cols_);
  for (int j = 0; j < cols_; ++j) out[j] = static_cast<double>(acc[j]);
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  long double acc = 0.0L;
  for (double x : data_) acc += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(acc));
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool DenseMatrix::is_symmetric(double rtol) const {
  if (rows_ != cols_) return false;
  const double tol = rtol * max_abs();
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double norm2(const Vector &v) {
  if (v.empty()) throw InvalidInputError("norm2: empty vector");
  double maxabs = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInputError("norm2: non-finite entry");
    maxabs = std::max(maxabs, std::abs(x));
  }
  if (maxabs == 0.0) return 0.0;
  long double acc = 0.0L;
  for (double x : v) {
    const long double t = static_cast<long double>(x) / maxabs;
    acc += t * t;
  }
  return static_cast<double>(maxabs * std::sqrt(acc));
}

double dot(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) throw InvalidInputError("dot: length mismatch");
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(acc);
}

void add_scaled(Vector &y, double alpha, const Vector &x) {
  if (x.size() != y.size()) throw InvalidInputError("add_scaled: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

GivensResult givens(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInputError("givens: non-finite input");
  GivensResult out;
  if (a == 0.0 && b == 0.0) return out; // identity, r = 0
  const double r = std::hypot(a, b);
  out.rot.c = a / r;
  out.rot.s = b / r;
  out.r = r;
  return out;
}

std::optional<Vector> solve_hessenberg(const DenseMatrix &h, const Vector &rhs) {
  const int k = h.rows();
  if (h.cols() != k) throw InvalidInputError("solve_hessenberg: matrix must be square");
  if (static_cast<int>(rhs.size()) != k) throw InvalidInputError("solve_hessenberg: rhs length mismatch");

  DenseMatrix u = h;
  Vector y = rhs;
  double maxmag = 0.0;

  // Forward elimination; the only structurally nonzero entry below the
  // diagonal of column j is u(j+1, j), so the pivot choice is binary.
  for (int j = 0; j < k; ++j) {
    double diag = u(j, j);
    double sub = (j + 1 < k) ? u(j + 1, j) : 0.0;
    maxmag = std::max({maxmag, std::abs(diag), std::abs(sub)});
    if (j + 1 < k && std::abs(sub) > std::abs(diag)) {
      for (int c = j; c < k; ++c) std::swap(u(j, c), u(j + 1, c));
      std::swap(y[j], y[j + 1]);
      diag = u(j, j);
    }
    if (std::abs(diag) <= kSingularityTol * maxmag) return std::nullopt;
    if (j + 1 < k) {
      const double m = u(j + 1, j) / diag;
      if (m != 0.0) {
        u(j + 1, j) = 0.0;
        for (int c = j + 1; c < k; ++c) u(j + 1, c) -= m * u(j, c);
        y[j + 1] -= m * y[j];
      }
    }
  }

  for (int i = k - 1; i >= 0; --i) {
    long double acc = y[i];
    for (int c = i + 1; c < k; ++c) acc -= static_cast<long double>(u(i, c)) * y[c];
    y[i] = static_cast<double>(acc / u(i, i));
  }
  return y;
}

LuFactorization lu_factor(const DenseMatrix &a) {
  const int n = a.rows();
  if (a.cols() != n) throw InvalidInputError("lu_factor: matrix must be square");

  LuFactorization f;
  f.lu_ = a;
  f.perm_.resize(n);
  for (int i = 0; i < n; ++i) f.perm_[i] = i;

  DenseMatrix &lu = f.lu_;
  double maxmag = 0.0;
  for (int j = 0; j < n; ++j) {
    int piv = j;
    double pm = std::abs(lu(j, j));
    for (int i = j + 1; i < n; ++i) {
      const double m = std::abs(lu(i, j));
      if (m > pm) {
        pm = m;
        piv = i;
      }
    }
    maxmag = std::max(maxmag, pm);
    if (pm <= kSingularityTol * maxmag || maxmag == 0.0) {
      f.singular_ = true;
      return f;
    }
    if (piv != j) {
      for (int c = 0; c < n; ++c) std::swap(lu(j, c), lu(piv, c));
      std::swap(f.perm_[j], f.perm_[piv]);
    }
    for (int i = j + 1; i < n; ++i) {
      const double m = lu(i, j) / lu(j, j);
      lu(i, j) = m;
      for (int c = j + 1; c < n; ++c) lu(i, c) -= m * lu(j, c);
    }
  }
  return f;
}

Vector LuFactorization::solve(const Vector &rhs) const {
  if (singular_) throw SingularMatrixError("LuFactorization::solve: matrix is singular to working precision");
  const int n = lu_.rows();
  if (static_cast<int>(rhs.size()) != n) throw InvalidInputError("LuFactorization::solve: rhs length mismatch");

  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  // L y = P rhs (unit diagonal)
  for (int i = 0; i < n; ++i) {
    long double acc = x[i];
    for (int j = 0; j < i; ++j) acc -= static_cast<long double>(lu_(i, j)) * x[j];
    x[i] = static_cast<double>(acc);
  }
  // U x = y
  for (int i = n - 1; i >= 0; --i) {
    long double acc = x[i];
    for (int j = i + 1; j < n; ++j) acc -= static_cast<long double>(lu_(i, j)) * x[j];
    x[i] = static_cast<double>(acc / lu_(i, i));
  }
  return x;
}

Vector LuFactorization::solve_transpose(const Vector &rhs) const {
  if (singular_) {
    throw SingularMatrixError("LuFactorization::solve_transpose: matrix is singular to working precision");
  }
  const int n = lu_.rows();
  if (static_cast<int>(rhs.size()) != n) {
    throw InvalidInputError("LuFactorization::solve_transpose: rhs length mismatch");
  }

  // A^T = U^T L^T P, so solve U^T w = rhs, L^T z = w, then x = P^T z.
  Vector w = rhs;
  for (int i = 0; i < n; ++i) {
    long double acc = w[i];
    for (int j = 0; j < i; ++j) acc -= static_cast<long double>(lu_(j, i)) * w[j];
    w[i] = static_cast<double>(acc / lu_(i, i));
  }
  for (int i = n - 1; i >= 0; --i) {
    long double acc = w[i];
    for (int j = i + 1; j < n; ++j) acc -= static_cast<long double>(lu_(j, i)) * w[j];
    w[i] = static_cast<double>(acc);
  }
  Vector x(n);
  for (int i = 0; i < n; ++i) x[perm_[i]] = w[i];
  return x;
}

DenseMatrix LuFactorization::reconstruct_permuted() const {
  const int n = lu_.rows();
  DenseMatrix pa(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      long double acc = 0.0L;
      const int kmax = std::min(i, j);
      for (int k = 0; k <= kmax; ++k) {
        const double l = (k == i) ? 1.0 : lu_(i, k);
        acc += static_cast<long double>(l) * lu_(k, j);
      }
      pa(i, j) = static_cast<double>(acc);
    }
  }
  return pa;
}

Vector lu_solve(const DenseMatrix &a, const Vector &rhs) {
  return lu_factor(a).solve(rhs);
}

namespace {

double offdiag_frobenius(const DenseMatrix &a) {
  long double acc = 0.0L;
  const int n = a.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) acc += static_cast<long double>(a(i, j)) * a(i, j);
  return static_cast<double>(std::sqrt(acc));
}

} // namespace

EighResult jacobi_eigh(const DenseMatrix &input) {
  const int n = input.rows();
  if (input.cols() != n) throw InvalidInputError("jacobi_eigh: matrix must be square");
  {
    const double tol = 1e-12 * input.max_abs();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(input(i, j) - input(j, i)) > tol) {
          throw InvalidInputError("jacobi_eigh: matrix is not symmetric");
        }
  }

  DenseMatrix a = input;
  DenseMatrix v = DenseMatrix::identity(n);
  const double fro = a.frobenius_norm();
  const double stop = 1e-12 * fro;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (offdiag_frobenius(a) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j);
          const double aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&a](int x, int y) { return a(x, x) < a(y, y); });

  EighResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

double cond2_estimate(const DenseMatrix &a, double tol) {
  const int n = a.rows();
  if (a.cols() != n) throw InvalidInputError("cond2_estimate: matrix must be square");
  if (tol <= 0.0) throw InvalidInputError("cond2_estimate: tol must be positive");

  const LuFactorization lu = lu_factor(a);
  if (lu.singular()) throw SingularMatrixError("cond2_estimate: matrix is singular to working precision");

  Rng rng(0x5eedf00dULL);
  const int max_iters = 200000;

  auto normalize = [](Vector &v) {
    const double nv = norm2(v);
    for (double &x : v) x /= nv;
  };

  // Largest singular value: power iteration on A^T A.
  Vector v(n);
  for (double &x : v) x = rng.uniform(-1.0, 1.0);
  normalize(v);
  double sigma_max_sq = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = a.apply_transpose(a.apply(v));
    const double rho = dot(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) break;
    for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (it > 0 && std::abs(rho - sigma_max_sq) <= tol * std::abs(rho)) {
      sigma_max_sq = rho;
      break;
    }
    sigma_max_sq = rho;
  }

  // Smallest singular value: inverse iteration on (A^T A)^{-1} via the
  // factors, x -> A^{-1} A^{-T} x.
  Vector u(n);
  for (double &x : u) x = rng.uniform(-1.0, 1.0);
  normalize(u);
  double inv_sigma_min_sq = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = lu.solve(lu.solve_transpose(u));
    const double rho = dot(u, w);
    const double nw = norm2(w);
    if (nw == 0.0) break;
    for (int i = 0; i < n; ++i) u[i] = w[i] / nw;
    if (it > 0 && std::abs(rho - inv_sigma_min_sq) <= tol * std::abs(rho)) {
      inv_sigma_min_sq = rho;
      break;
    }
    inv_sigma_min_sq = rho;
  }

  return std::sqrt(sigma_max_sq * inv_sigma_min_sq);
}

} // namespace krylab
