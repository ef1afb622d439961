#include "krylab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace krylab {

ResidualNorm ResidualNorm::finite(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInputError("ResidualNorm: value must be finite and >= 0");
  ResidualNorm r;
  r.value_ = v;
  return r;
}

ResidualNorm ResidualNorm::infinite() {
  ResidualNorm r;
  r.infinite_ = true;
  return r;
}

double ResidualNorm::value() const {
  if (infinite_) throw InvalidStateError("ResidualNorm: value() on the INFINITE marker");
  return value_;
}

double ResidualNorm::numeric() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

ThetaSequence theta_sequence(const DenseMatrix &h) {
  const int k = h.cols();
  if (h.rows() != k + 1) throw InvalidInputError("theta_sequence: H must be (k+1) x k");

  ThetaSequence theta;
  theta.values.assign(static_cast<std::size_t>(k) + 1, 0.0);
  theta.values[0] = 1.0;
  for (int col = 0; col < k; ++col) {
    const double sub = h(col + 1, col);
    if (sub == 0.0) {
      throw InvalidInputError("theta_sequence: zero subdiagonal inside the range (truncate at breakdown)");
    }
    long double acc = 0.0L;
    for (int j = 0; j <= col; ++j) acc += static_cast<long double>(theta.values[j]) * h(j, col);
    theta.values[col + 1] = static_cast<double>(-acc / sub);
  }
  return theta;
}

ThetaSequence theta_sequence(const ArnoldiDecomposition &dec, int k) {
  if (k == 0) {
    ThetaSequence theta;
    theta.values = {1.0};
    return theta;
  }
  return theta_sequence(dec.hessenberg(k));
}

ThetaNorms norms_from_theta(const ThetaSequence &theta, double beta) {
  if (theta.values.empty() || theta.values[0] != 1.0) {
    throw InvalidInputError("norms_from_theta: theta_1 must be 1");
  }
  ThetaNorms out;
  long double sumsq = 0.0L;
  for (std::size_t j = 0; j < theta.values.size(); ++j) {
    const double t = theta.values[j];
    sumsq += static_cast<long double>(t) * t;
    out.fom.push_back(t == 0.0 ? ResidualNorm::infinite()
                               : ResidualNorm::finite(beta / std::abs(t)));
    out.gmres.push_back(static_cast<double>(beta / std::sqrt(sumsq)));
  }
  return out;
}

std::vector<double> gmres_from_fom(const std::vector<ResidualNorm> &fom_norms) {
  if (fom_norms.empty()) throw InvalidInputError("gmres_from_fom: empty input");
  if (fom_norms[0].is_infinite() || fom_norms[0].value() <= 0.0) {
    throw InvalidInputError("gmres_from_fom: first FOM norm must be finite positive");
  }
  std::vector<double> out;
  out.reserve(fom_norms.size());
  long double acc = 0.0L;
  for (const ResidualNorm &f : fom_norms) {
    if (!f.is_infinite()) { // 1/infinity = 0 contributes nothing
      const long double v = f.value();
      acc += 1.0L / (v * v);
    }
    out.push_back(static_cast<double>(1.0L / std::sqrt(acc)));
  }
  return out;
}

std::vector<ResidualNorm> fom_from_gmres(const std::vector<double> &gmres_norms) {
  if (gmres_norms.empty()) throw InvalidInputError("fom_from_gmres: empty input");
  std::vector<ResidualNorm> out;
  out.reserve(gmres_norms.size());
  for (std::size_t k = 0; k < gmres_norms.size(); ++k) {
    const double g = gmres_norms[k];
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw InvalidInputError("fom_from_gmres: norms must be positive and finite");
    }
    if (k == 0) {
      out.push_back(ResidualNorm::finite(g));
      continue;
    }
    const double ratio = g / gmres_norms[k - 1];
    if (ratio > 1.0) throw InvalidInputError("fom_from_gmres: GMRES norms must be non-increasing");
    if (ratio == 1.0) {
      out.push_back(ResidualNorm::infinite());
      continue;
    }
    out.push_back(ResidualNorm::finite(g / std::sqrt(1.0 - ratio * ratio)));
  }
  return out;
}

namespace {

struct FomSolve {
  Vector x;
  Vector y; // H_k y = e_1
};

// The one Galerkin solve path: fom_iterate and reciprocal Arnoldi-FA both
// go through here, so their iterates are identical by construction.
std::optional<FomSolve> fom_solve(const ArnoldiDecomposition &dec, int k) {
  if (k < 1 || k > dec.steps()) throw InvalidInputError("fom solve: k out of range");
  const DenseMatrix hk = dec.hessenberg_square(k);
  Vector e1(k, 0.0);
  e1[0] = 1.0;
  std::optional<Vector> y = solve_hessenberg(hk, e1);
  if (!y) return std::nullopt;
  Vector x(dec.dim(), 0.0);
  for (int j = 0; j < k; ++j) add_scaled(x, dec.beta() * (*y)[j], dec.basis()[j]);
  return FomSolve{std::move(x), std::move(*y)};
}

} // namespace

std::optional<Vector> fom_solution(const ArnoldiDecomposition &dec, int k) {
  std::optional<FomSolve> s = fom_solve(dec, k);
  if (!s) return std::nullopt;
  return std::move(s->x);
}

FomResult fom_iterate(const ArnoldiDecomposition &dec, const LinearOperator &a, int k) {
  FomResult out{{}, ResidualNorm::infinite(), ResidualNorm::infinite()};
  std::optional<FomSolve> s = fom_solve(dec, k);
  if (!s) return out; // singular H_k: FOM residual norm is infinite

  // r_k = -beta * h_{k+1,k} * y_k * q_{k+1}
  out.estimate = ResidualNorm::finite(dec.beta() * dec.h(k, k - 1) * std::abs(s->y[k - 1]));
  out.direct = ResidualNorm::finite(norm2(residual_vector(a, s->x, dec.rhs())));
  out.x = std::move(s->x);
  return out;
}

GmresResult gmres_iterate(const ArnoldiDecomposition &dec, const LinearOperator &a, int k) {
  if (k < 1 || k > dec.steps()) throw InvalidInputError("gmres_iterate: k out of range");

  // Progressive Givens QR of the (k+1) x k Hessenberg least-squares problem.
  DenseMatrix r = dec.hessenberg(k);
  Vector g(k + 1, 0.0);
  g[0] = dec.beta();
  std::vector<GivensRotation> rots;
  rots.reserve(k);
  for (int j = 0; j < k; ++j) {
    for (const GivensRotation &rot : rots) {
      const int i = rot.index;
      const double a0 = r(i, j);
      const double a1 = r(i + 1, j);
      r(i, j) = rot.c * a0 + rot.s * a1;
      r(i + 1, j) = -rot.s * a0 + rot.c * a1;
    }
    GivensResult gr = givens(r(j, j), r(j + 1, j));
    gr.rot.index = j;
    r(j, j) = gr.r;
    r(j + 1, j) = 0.0;
    const double g0 = g[j];
    const double g1 = g[j + 1];
    g[j] = gr.rot.c * g0 + gr.rot.s * g1;
    g[j + 1] = -gr.rot.s * g0 + gr.rot.c * g1;
    rots.push_back(gr.rot);
  }

  // Back substitution in the k x k upper-triangular block.
  Vector z(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    long double acc = g[i];
    for (int c = i + 1; c < k; ++c) acc -= static_cast<long double>(r(i, c)) * z[c];
    if (r(i, i) == 0.0) {
      throw SingularMatrixError("gmres_iterate: rank-deficient least-squares system");
    }
    z[i] = static_cast<double>(acc / r(i, i));
  }

  GmresResult out;
  out.x.assign(dec.dim(), 0.0);
  for (int j = 0; j < k; ++j) add_scaled(out.x, z[j], dec.basis()[j]);
  out.givens = std::abs(g[k]);
  out.direct = norm2(residual_vector(a, out.x, dec.rhs()));
  return out;
}

IdentityDeviation max_identity_deviation(const ConvergenceHistory &h, double window_rtol) {
  IdentityDeviation dev;
  const double cutoff = window_rtol * h.beta;
  for (const HistoryRecord &r : h.records) {
    if (r.gmres_direct < cutoff) continue;
    if (!r.fom_direct.is_infinite() && !r.fom_theta.is_infinite()) {
      dev.fom = std::max(dev.fom, std::abs(r.fom_direct.value() - r.fom_theta.value()) / h.beta);
    }
    dev.gmres = std::max(dev.gmres, std::abs(r.gmres_direct - r.gmres_theta) / r.gmres_direct);
  }
  return dev;
}

ConvergenceHistory run_history(const LinearOperator &a, const Vector &b, int k_max,
                               bool with_errors, ArnoldiOptions opts) {
  const ArnoldiDecomposition dec = arnoldi_run(a, b, k_max, opts);
  const int kend = dec.steps();

  ConvergenceHistory hist;
  hist.beta = dec.beta();
  hist.with_errors = with_errors;
  hist.breakdown = dec.breakdown();

  Vector xref;
  if (with_errors) {
    xref = lu_solve(a.to_dense(), b);
    hist.ref_norm = norm2(xref);
  }
  auto error_of = [&](const Vector &x) {
    Vector d(xref);
    add_scaled(d, -1.0, x);
    return norm2(d);
  };

  // Theta values exist for every column before breakdown; the breakdown
  // column has a zero subdiagonal and its exact-arithmetic norms are zero.
  const int theta_cols = dec.breakdown() ? kend - 1 : kend;
  const ThetaNorms tn = norms_from_theta(theta_sequence(dec, theta_cols), dec.beta());

  HistoryRecord r0;
  r0.k = 0;
  r0.fom_direct = ResidualNorm::finite(dec.beta());
  r0.fom_theta = tn.fom[0];
  r0.gmres_direct = dec.beta();
  r0.gmres_theta = tn.gmres[0];
  if (with_errors) {
    r0.fom_error = ResidualNorm::finite(hist.ref_norm);
    r0.gmres_error = hist.ref_norm;
  }
  hist.records.push_back(std::move(r0));

  for (int k = 1; k <= kend; ++k) {
    HistoryRecord rec;
    rec.k = k;
    const FomResult fr = fom_iterate(dec, a, k);
    const GmresResult gr = gmres_iterate(dec, a, k);
    rec.fom_direct = fr.direct;
    rec.gmres_direct = gr.direct;
    if (k <= theta_cols) {
      rec.fom_theta = tn.fom[k];
      rec.gmres_theta = tn.gmres[k];
    } else {
      rec.fom_theta = ResidualNorm::finite(0.0);
      rec.gmres_theta = 0.0;
    }
    if (with_errors) {
      rec.fom_error = fr.x.empty() ? ResidualNorm::infinite() : ResidualNorm::finite(error_of(fr.x));
      rec.gmres_error = error_of(gr.x);
    }
    hist.records.push_back(std::move(rec));
  }
  return hist;
}

} // namespace krylab
