#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "krylab/bounds.hpp"
#include "krylab/matfunc.hpp"

namespace krylab {

struct MatrixMarketSource {
  std::string path;
};
struct SpectrumSource {
  SpectrumSpec spec;
};
struct PrescribedSource {
  Vector f;
};
struct RandomSparseSource {
  int n = 0;
  double density = 0.0;
  std::uint64_t seed = 0;
};

using ProblemSource =
    std::variant<MatrixMarketSource, SpectrumSource, PrescribedSource, RandomSparseSource>;

struct RhsOnes {};
struct RhsE1 {};
struct RhsRandom {
  std::uint64_t seed = 0;
};
using RhsRule = std::variant<RhsOnes, RhsE1, RhsRandom>;

struct ToleranceConfig {
  double identity = 1e-8;    // recurrence-vs-direct agreement, relative
  double breakdown = 1e-12;  // Arnoldi breakdown, relative to max ||A q||
  double convergence = 1e-14; // converged-tail exclusion, relative to beta
};

/// Everything one experiment run needs. Exactly one problem source; a
/// prescribed source fixes b = f_0 e_1 and ignores the rhs rule.
struct ExperimentConfig {
  ProblemSource problem = SpectrumSource{};
  RhsRule rhs = RhsOnes{};
  int k_max = 80;
  bool reorthogonalize = true;
  ToleranceConfig tol;
  bool with_errors = false;
  bool with_matfunc = false; // inverse-sqrt near-optimality stage (SPD spectra)
  int matfunc_quad_nodes = 40;
  std::string out_dir = ".";
  bool plots = true;
  /// Plot emphasis: "fig1" residuals only, "fig2" adds best-so-far and the
  /// bound, "fig3" error norms, "sharpness" like fig2. Empty means fig2.
  std::string figure;
};

/// Parses the JSON config document; throws ConfigError naming the field.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config_file(const std::string &path);

/// Known presets: fig1-left, fig1-right, fig2-left, fig2-right, fig3-left,
/// fig3-right, sharpness-<k>. The -right presets read a Matrix Market file
/// and require mm_path.
ExperimentConfig preset(const std::string &name, const std::string &mm_path = "");

struct ExperimentResult {
  ConvergenceHistory history;
  BoundReport bound;
  IdentityDeviation identity; // informational, compared against tol.identity
  std::optional<ErrorReport> error_report;
  std::optional<MatFuncReport> matfunc;
  std::vector<std::string> files_written;
  bool all_checks_passed = false;
};

struct BuiltProblem {
  LinearOperator op;
  Vector b;
};

BuiltProblem build_problem(const ExperimentConfig &cfg);

/// Runs the configured pipeline and serializes CSV/SVG outputs atomically.
/// With write_outputs = false only the checks run (the `verify` mode).
ExperimentResult run_experiment(const ExperimentConfig &cfg, bool write_outputs = true);

} // namespace krylab
