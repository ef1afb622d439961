#include "krylab/arnoldi.hpp"

#include <algorithm>
#include <cmath>

namespace krylab {

ArnoldiDecomposition ArnoldiDecomposition::start(const LinearOperator &a, const Vector &b,
                                                 ArnoldiOptions opts) {
  if (static_cast<int>(b.size()) != a.dim()) throw InvalidInputError("arnoldi: dimension mismatch");
  const double beta = norm2(b);
  if (beta == 0.0) throw InvalidInputError("arnoldi: b must be nonzero");

  ArnoldiDecomposition dec;
  dec.n_ = a.dim();
  dec.beta_ = beta;
  dec.opts_ = opts;
  Vector q1(b);
  for (double &x : q1) x /= beta;
  dec.q_.push_back(std::move(q1));
  return dec;
}

void ArnoldiDecomposition::extend(const LinearOperator &a) {
  if (breakdown_) throw InvalidStateError("arnoldi: cannot extend past breakdown");
  if (steps() >= n_) throw InvalidStateError("arnoldi: cannot extend past the space dimension");
  if (a.dim() != n_) throw InvalidInputError("arnoldi: operator dimension changed");

  Vector w = a.apply(q_.back());
  max_aq_norm_ = std::max(max_aq_norm_, norm2(w));

  const int m = basis_size();
  std::vector<double> hcol(m + 1, 0.0);
  for (int j = 0; j < m; ++j) {
    const double hj = dot(q_[j], w);
    add_scaled(w, -hj, q_[j]);
    hcol[j] = hj;
  }
  if (opts_.reorthogonalize) {
    for (int j = 0; j < m; ++j) {
      const double c = dot(q_[j], w);
      add_scaled(w, -c, q_[j]);
      hcol[j] += c;
    }
  }
  const double hnext = norm2(w);
  hcol[m] = hnext;
  hcols_.push_back(std::move(hcol));

  if (hnext <= opts_.breakdown_rtol * max_aq_norm_) {
    breakdown_ = true;
    breakdown_step_ = steps();
    return;
  }
  for (double &x : w) x /= hnext;
  q_.push_back(std::move(w));
}

double ArnoldiDecomposition::h(int i, int j) const {
  if (j < 0 || j >= steps()) throw InvalidInputError("arnoldi: H column out of range");
  const auto &col = hcols_[j];
  if (i < 0 || i >= static_cast<int>(col.size())) return 0.0;
  return col[i];
}

DenseMatrix ArnoldiDecomposition::hessenberg(int k) const {
  if (k < 1 || k > steps()) throw InvalidInputError("arnoldi: k out of range");
  DenseMatrix h(k + 1, k);
  for (int j = 0; j < k; ++j) {
    const auto &col = hcols_[j];
    const int rows = std::min<int>(k + 1, static_cast<int>(col.size()));
    for (int i = 0; i < rows; ++i) h(i, j) = col[i];
  }
  return h;
}

DenseMatrix ArnoldiDecomposition::hessenberg_square(int k) const {
  if (k < 1 || k > steps()) throw InvalidInputError("arnoldi: k out of range");
  DenseMatrix h(k, k);
  for (int j = 0; j < k; ++j) {
    const auto &col = hcols_[j];
    const int rows = std::min<int>(k, static_cast<int>(col.size()));
    for (int i = 0; i < rows; ++i) h(i, j) = col[i];
  }
  return h;
}

Vector ArnoldiDecomposition::rhs() const {
  Vector b = q_.front();
  for (double &x : b) x *= beta_;
  return b;
}

double ArnoldiDecomposition::orthogonality_defect() const {
  const int m = basis_size();
  double defect = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double g = dot(q_[i], q_[j]);
      defect = std::max(defect, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return defect;
}

double ArnoldiDecomposition::relation_residual(const LinearOperator &a) const {
  const int k = steps();
  long double acc = 0.0L;
  for (int j = 0; j < k; ++j) {
    Vector col = a.apply(q_[j]);
    const auto &hcol = hcols_[j];
    for (std::size_t i = 0; i < hcol.size(); ++i) {
      if (static_cast<int>(i) < basis_size()) add_scaled(col, -hcol[i], q_[i]);
    }
    for (double x : col) acc += static_cast<long double>(x) * x;
  }
  return static_cast<double>(std::sqrt(acc));
}

ArnoldiDecomposition arnoldi_run(const LinearOperator &a, const Vector &b, int k_max,
                                 ArnoldiOptions opts) {
  if (k_max < 0 || k_max > a.dim()) throw InvalidInputError("arnoldi_run: k_max out of range");
  ArnoldiDecomposition dec = ArnoldiDecomposition::start(a, b, opts);
  for (int k = 0; k < k_max && !dec.breakdown(); ++k) dec.extend(a);
  return dec;
}

} // namespace krylab
