#include "krylab/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace krylab {

std::vector<ResidualNorm> best_so_far(const std::vector<ResidualNorm> &seq) {
  if (seq.empty()) throw InvalidInputError("best_so_far: empty sequence");
  std::vector<ResidualNorm> out;
  out.reserve(seq.size());
  ResidualNorm best = seq.front();
  for (const ResidualNorm &v : seq) {
    if (!v.is_infinite() && v.numeric() < best.numeric()) best = v;
    out.push_back(best);
  }
  return out;
}

BoundReport check_main_bound(const ConvergenceHistory &h, double exclude_rtol) {
  if (h.records.empty()) throw InvalidInputError("check_main_bound: empty history");

  std::vector<ResidualNorm> fom;
  fom.reserve(h.records.size());
  for (const HistoryRecord &r : h.records) fom.push_back(r.fom_direct);
  const std::vector<ResidualNorm> best = best_so_far(fom);

  BoundReport rep;
  rep.exclude_rtol = exclude_rtol;
  const double cutoff = exclude_rtol * h.beta;
  for (std::size_t i = 0; i < h.records.size(); ++i) {
    BoundRow row;
    row.k = h.records[i].k;
    row.fom_best = best[i];
    row.gmres = h.records[i].gmres_direct;
    row.bound = std::sqrt(static_cast<double>(row.k + 1)) * row.gmres;
    if (row.gmres >= cutoff && !row.fom_best.is_infinite()) {
      row.ratio = row.fom_best.value() / row.bound;
      rep.worst_ratio = std::max(rep.worst_ratio, *row.ratio);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-10;
  return rep;
}

SharpnessResult sharpness_instance(int k) {
  if (k < 1) throw InvalidInputError("sharpness_instance: k must be >= 1");
  SharpnessResult out{build_prescribed_instance(Vector(static_cast<std::size_t>(k) + 1, 1.0)), {}, {}};
  const LinearOperator op = out.instance.op();
  out.history = run_history(op, out.instance.b, k);
  out.report = check_main_bound(out.history);
  return out;
}

ErrorReport check_error_bound(const ConvergenceHistory &h, double kappa, double exclude_rtol) {
  if (!h.with_errors) throw InvalidInputError("check_error_bound: history carries no error norms");
  if (!(kappa >= 1.0)) throw InvalidInputError("check_error_bound: kappa must be >= 1");

  std::vector<ResidualNorm> fom_err;
  fom_err.reserve(h.records.size());
  for (const HistoryRecord &r : h.records) fom_err.push_back(r.fom_error);
  const std::vector<ResidualNorm> best = best_so_far(fom_err);

  ErrorReport rep;
  rep.kappa = kappa;
  rep.exclude_rtol = exclude_rtol;
  const double cutoff = exclude_rtol * h.ref_norm;
  for (std::size_t i = 0; i < h.records.size(); ++i) {
    ErrorRow row;
    row.k = h.records[i].k;
    row.fom_err_best = best[i];
    row.gmres_err = h.records[i].gmres_error;
    row.bound = std::sqrt(static_cast<double>(row.k + 1)) * kappa * row.gmres_err;
    if (row.gmres_err >= cutoff && !row.fom_err_best.is_infinite()) {
      row.ratio = row.fom_err_best.value() / row.bound;
      rep.worst_ratio = std::max(rep.worst_ratio, *row.ratio);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-10;
  return rep;
}

KappaEstimate operator_kappa(const LinearOperator &a, double tol) {
  if (const Vector *d = a.diagonal()) {
    double lo = std::abs((*d)[0]);
    double hi = lo;
    for (double x : *d) {
      lo = std::min(lo, std::abs(x));
      hi = std::max(hi, std::abs(x));
    }
    if (lo == 0.0) throw SingularMatrixError("operator_kappa: diagonal operator is singular");
    return {hi / lo, true};
  }
  return {1.01 * cond2_estimate(a.to_dense(), tol), false};
}

} // namespace krylab
