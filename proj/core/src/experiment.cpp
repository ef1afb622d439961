#include "krylab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "krylab/csv.hpp"
#include "krylab/rng.hpp"
#include "krylab/svgplot.hpp"

namespace krylab {

using nlohmann::json;

namespace {

ProblemSource parse_problem(const json &j) {
  if (!j.is_object()) throw ConfigError("config: 'problem' must be an object");
  const std::string type = j.value("type", "");
  if (type == "matrix-market") {
    if (!j.contains("path")) throw ConfigError("config: problem.path is required for matrix-market");
    return MatrixMarketSource{j.at("path").get<std::string>()};
  }
  if (type == "spectrum") {
    if (!j.contains("intervals") || !j.at("intervals").is_array() || j.at("intervals").empty()) {
      throw ConfigError("config: problem.intervals must be a nonempty array");
    }
    SpectrumSpec spec;
    for (const json &iv : j.at("intervals")) {
      SpectrumInterval s;
      s.lo = iv.value("min", 0.0);
      s.hi = iv.value("max", 0.0);
      s.count = iv.value("count", 0);
      if (s.count <= 0) throw ConfigError("config: problem.intervals[].count must be positive");
      spec.intervals.push_back(s);
    }
    return SpectrumSource{std::move(spec)};
  }
  if (type == "prescribed") {
    if (!j.contains("f") || !j.at("f").is_array() || j.at("f").empty()) {
      throw ConfigError("config: problem.f must be a nonempty array");
    }
    Vector f;
    for (const json &v : j.at("f")) f.push_back(v.get<double>());
    return PrescribedSource{std::move(f)};
  }
  if (type == "random-sparse") {
    RandomSparseSource s;
    s.n = j.value("n", 0);
    s.density = j.value("density", 0.05);
    s.seed = j.value("seed", std::uint64_t{1});
    if (s.n <= 0) throw ConfigError("config: problem.n must be positive");
    return s;
  }
  throw ConfigError("config: problem.type must be one of matrix-market, spectrum, prescribed, random-sparse");
}

RhsRule parse_rhs(const json &j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "ones") return RhsOnes{};
    if (s == "e1") return RhsE1{};
    throw ConfigError("config: rhs must be 'ones', 'e1' or {type: random, seed}");
  }
  if (j.is_object() && j.value("type", "") == "random") {
    return RhsRandom{j.value("seed", std::uint64_t{1})};
  }
  throw ConfigError("config: rhs must be 'ones', 'e1' or {type: random, seed}");
}

} // namespace

ExperimentConfig parse_config(const std::string &json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  if (!j.contains("problem")) throw ConfigError("config: 'problem' is required");
  cfg.problem = parse_problem(j.at("problem"));
  if (j.contains("rhs")) cfg.rhs = parse_rhs(j.at("rhs"));
  cfg.k_max = j.value("k_max", cfg.k_max);
  if (cfg.k_max < 0) throw ConfigError("config: k_max must be nonnegative");
  cfg.reorthogonalize = j.value("reorthogonalize", cfg.reorthogonalize);
  if (j.contains("tolerances")) {
    const json &t = j.at("tolerances");
    cfg.tol.identity = t.value("identity", cfg.tol.identity);
    cfg.tol.breakdown = t.value("breakdown", cfg.tol.breakdown);
    cfg.tol.convergence = t.value("convergence", cfg.tol.convergence);
    if (cfg.tol.identity <= 0 || cfg.tol.breakdown <= 0 || cfg.tol.convergence <= 0) {
      throw ConfigError("config: tolerances.{identity,breakdown,convergence} must be positive");
    }
  }
  cfg.with_errors = j.value("with_errors", cfg.with_errors);
  cfg.with_matfunc = j.value("with_matfunc", cfg.with_matfunc);
  cfg.matfunc_quad_nodes = j.value("matfunc_quad_nodes", cfg.matfunc_quad_nodes);
  if (cfg.matfunc_quad_nodes < 1) throw ConfigError("config: matfunc_quad_nodes must be >= 1");
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.plots = j.value("plots", cfg.plots);
  cfg.figure = j.value("figure", cfg.figure);
  return cfg;
}

ExperimentConfig load_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ExperimentConfig preset(const std::string &name, const std::string &mm_path) {
  ExperimentConfig cfg;

  if (name.rfind("sharpness-", 0) == 0) {
    const std::string tail = name.substr(10);
    int k = 0;
    try {
      k = std::stoi(tail);
    } catch (...) {
      throw ConfigError("preset: bad sharpness iteration count '" + tail + "'");
    }
    if (k < 1) throw ConfigError("preset: sharpness iteration count must be >= 1");
    cfg.problem = PrescribedSource{Vector(static_cast<std::size_t>(k) + 1, 1.0)};
    cfg.k_max = k;
    cfg.figure = "sharpness";
    return cfg;
  }

  const bool left = name.size() > 5 && name.substr(4) == "-left";
  const bool right = name.size() > 5 && name.substr(4) == "-right";
  const std::string fig = name.substr(0, 4);
  if ((fig != "fig1" && fig != "fig2" && fig != "fig3") || (!left && !right)) {
    throw ConfigError("preset: unknown name '" + name + "'");
  }

  if (left) {
    // Synthetic symmetric operator: 500 eigenvalues equally spaced over
    // [-10,-1] u [1,20], split evenly between the intervals, b = ones.
    SpectrumSpec spec;
    spec.intervals.push_back({-10.0, -1.0, 250});
    spec.intervals.push_back({1.0, 20.0, 250});
    cfg.problem = SpectrumSource{std::move(spec)};
  } else {
    if (mm_path.empty()) throw ConfigError("preset: '" + name + "' needs a Matrix Market file path");
    cfg.problem = MatrixMarketSource{mm_path};
  }
  cfg.rhs = RhsOnes{};
  cfg.k_max = 80;
  cfg.figure = fig;
  cfg.with_errors = (fig == "fig3");
  return cfg;
}

BuiltProblem build_problem(const ExperimentConfig &cfg) {
  if (const auto *p = std::get_if<PrescribedSource>(&cfg.problem)) {
    PrescribedInstance inst = build_prescribed_instance(p->f);
    return {inst.op(), inst.b};
  }

  LinearOperator op = [&cfg]() {
    if (const auto *mm = std::get_if<MatrixMarketSource>(&cfg.problem)) {
      return LinearOperator::from_csr(parse_matrix_market_file(mm->path));
    }
    if (const auto *sp = std::get_if<SpectrumSource>(&cfg.problem)) {
      return gen_spectrum_operator(sp->spec);
    }
    const auto &rs = std::get<RandomSparseSource>(cfg.problem);
    return random_sparse_operator(rs.n, rs.density, rs.seed);
  }();

  Vector b;
  if (std::holds_alternative<RhsOnes>(cfg.rhs)) {
    b = ones_vector(op.dim());
  } else if (std::holds_alternative<RhsE1>(cfg.rhs)) {
    b = unit_vector(op.dim(), 0);
  } else {
    Rng rng(std::get<RhsRandom>(cfg.rhs).seed);
    b.resize(op.dim());
    for (double &x : b) x = rng.uniform(-1.0, 1.0);
  }
  return {std::move(op), std::move(b)};
}

namespace {

std::vector<double> column(const ConvergenceHistory &h, const BoundReport &bound,
                           const std::string &which) {
  std::vector<double> out;
  out.reserve(h.records.size());
  for (std::size_t i = 0; i < h.records.size(); ++i) {
    const HistoryRecord &r = h.records[i];
    double v = 0.0;
    if (which == "fom") {
      v = r.fom_direct.numeric();
    } else if (which == "gmres") {
      v = r.gmres_direct;
    } else if (which == "best") {
      v = bound.rows[i].fom_best.numeric();
    } else {
      v = bound.rows[i].bound;
    }
    out.push_back(v / h.beta); // figures are normalized by ||b||
  }
  return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg, bool write_outputs) {
  BuiltProblem prob = build_problem(cfg);
  const int k_max = std::min(cfg.k_max, prob.op.dim());

  ArnoldiOptions opts;
  opts.reorthogonalize = cfg.reorthogonalize;
  opts.breakdown_rtol = cfg.tol.breakdown;

  ExperimentResult res;
  res.history = run_history(prob.op, prob.b, k_max, cfg.with_errors, opts);
  res.bound = check_main_bound(res.history, cfg.tol.convergence);
  res.identity = max_identity_deviation(res.history);

  if (cfg.with_errors) {
    const KappaEstimate kappa = operator_kappa(prob.op);
    res.error_report = check_error_bound(res.history, kappa.value, cfg.tol.convergence);
  }
  if (cfg.with_matfunc) {
    const Vector *d = prob.op.diagonal();
    double lmin = 0.0, lmax = 0.0;
    if (d) {
      lmin = *std::min_element(d->begin(), d->end());
      lmax = *std::max_element(d->begin(), d->end());
    } else {
      const EighResult eig = jacobi_eigh(prob.op.to_dense());
      lmin = eig.eigenvalues.front();
      lmax = eig.eigenvalues.back();
    }
    if (lmin <= 0.0) {
      throw ConfigError("config: with_matfunc requires a symmetric positive definite operator");
    }
    res.matfunc = near_opt_report(prob.op, prob.b, k_max,
                                  FunctionSpec::inverse_sqrt(lmin, lmax, cfg.matfunc_quad_nodes), opts);
  }

  res.all_checks_passed = res.bound.pass && (!res.error_report || res.error_report->pass);

  if (!write_outputs) return res;

  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);

  const std::string csv_path = (dir / "history.csv").string();
  write_file_atomic(csv_path,
                    render_history_csv(res.history, res.bound,
                                       res.error_report ? &*res.error_report : nullptr));
  res.files_written.push_back(csv_path);

  if (res.matfunc) {
    const std::string mf_path = (dir / "matfunc.csv").string();
    write_file_atomic(mf_path, render_matfunc_csv(*res.matfunc));
    res.files_written.push_back(mf_path);
  }

  if (cfg.plots) {
    const std::string figure = cfg.figure.empty() ? "fig2" : cfg.figure;
    std::vector<PlotSeries> series;
    // Figure conventions: FOM solid, GMRES dash-dot, bound dashed.
    if (figure == "fig1") {
      series.push_back({"FOM", column(res.history, res.bound, "fom"), LineStyle::Solid, ""});
      series.push_back({"GMRES", column(res.history, res.bound, "gmres"), LineStyle::DashDot, ""});
    } else {
      series.push_back({"best FOM so far", column(res.history, res.bound, "best"), LineStyle::Solid, ""});
      series.push_back({"bound", column(res.history, res.bound, "bound"), LineStyle::Dashed, ""});
      series.push_back({"FOM", column(res.history, res.bound, "fom"), LineStyle::Solid, "#bbbbbb"});
      series.push_back({"GMRES", column(res.history, res.bound, "gmres"), LineStyle::DashDot, ""});
    }
    PlotLabels labels;
    labels.title = "residual norms";
    labels.y_label = "residual norm / ||b||";
    const std::string svg_path = (dir / "residuals.svg").string();
    emit_svg_plot(series, /*log_y=*/true, svg_path, labels);
    res.files_written.push_back(svg_path);

    if (res.error_report) {
      std::vector<PlotSeries> eseries;
      std::vector<double> fom_err, gmres_err, best_err;
      for (std::size_t i = 0; i < res.history.records.size(); ++i) {
        fom_err.push_back(res.history.records[i].fom_error.numeric() / res.history.ref_norm);
        gmres_err.push_back(res.history.records[i].gmres_error / res.history.ref_norm);
        best_err.push_back(res.error_report->rows[i].fom_err_best.numeric() / res.history.ref_norm);
      }
      eseries.push_back({"best FOM error so far", best_err, LineStyle::Solid, ""});
      eseries.push_back({"FOM error", fom_err, LineStyle::Solid, "#bbbbbb"});
      eseries.push_back({"GMRES error", gmres_err, LineStyle::DashDot, ""});
      PlotLabels elabels;
      elabels.title = "error norms";
      elabels.y_label = "error norm / ||A^-1 b||";
      const std::string esvg_path = (dir / "errors.svg").string();
      emit_svg_plot(eseries, /*log_y=*/true, esvg_path, elabels);
      res.files_written.push_back(esvg_path);
    }

    if (res.matfunc) {
      std::vector<double> fa, best;
      for (const MatFuncRow &r : res.matfunc->rows) {
        fa.push_back(r.fa_error / res.matfunc->ref_norm);
        best.push_back(r.best_error / res.matfunc->ref_norm);
      }
      std::vector<PlotSeries> mseries;
      mseries.push_back({"Arnoldi-FA error", fa, LineStyle::Solid, ""});
      mseries.push_back({"best Krylov error", best, LineStyle::Dashed, ""});
      PlotLabels mlabels;
      mlabels.title = "matrix-function approximation";
      mlabels.y_label = "error norm / ||f(A)b||";
      const std::string msvg_path = (dir / "matfunc.svg").string();
      emit_svg_plot(mseries, /*log_y=*/true, msvg_path, mlabels);
      res.files_written.push_back(msvg_path);
    }
  }

  return res;
}

} // namespace krylab
