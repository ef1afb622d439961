// Command-line front end: runs convergence experiments, writes CSV series
// and SVG plots, and reports the bound checks through the exit status.
//
// Exit codes: 0 success, 1 bound violation, 2 input/config error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "krylab/experiment.hpp"

namespace {

constexpr const char *kOutDirEnv = "KRYLAB_OUT_DIR";

std::string default_out_dir() {
  const char *env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

void apply_overrides(krylab::ExperimentConfig &cfg, const std::string &out_dir, int k_max,
                     bool no_plots, int reorth) {
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (k_max > 0) cfg.k_max = k_max;
  if (no_plots) cfg.plots = false;
  if (reorth == 0) cfg.reorthogonalize = false;
  if (reorth == 1) cfg.reorthogonalize = true;
}

int report_and_exit_code(const krylab::ExperimentResult &res, bool verbose_files) {
  if (verbose_files) {
    for (const std::string &f : res.files_written) std::cout << "wrote " << f << "\n";
  }
  std::cout << "main bound (sqrt(k+1)): worst ratio " << res.bound.worst_ratio
            << (res.bound.pass ? "  [ok]" : "  [VIOLATED]") << "\n";
  if (res.error_report) {
    std::cout << "error bound (kappa " << res.error_report->kappa
              << (res.error_report->kappa_exact ? ", exact" : ", estimated") << "): worst ratio "
              << res.error_report->worst_ratio << (res.error_report->pass ? "  [ok]" : "  [VIOLATED]")
              << "\n";
  }
  if (res.matfunc) {
    std::cout << "matfunc quadrature certified rel error " << res.matfunc->quad_certified_rel_error
              << "\n";
  }
  return res.all_checks_passed ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"FOM/GMRES convergence laboratory"};
  app.require_subcommand(1);

  std::string config_path, preset_name, mm_path;
  std::string out_dir;
  int k_max = 0;
  bool no_plots = false;
  int reorth = -1; // -1 keep config, 0 off, 1 on
  int sharpness_k = 0;

  CLI::App *run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--k-max", k_max, "iteration cap (overrides config)");
  run->add_flag("--no-plots", no_plots, "skip SVG output");
  run->add_flag_callback("--reorth", [&reorth]() { reorth = 1; }, "force reorthogonalization on");
  run->add_flag_callback("--no-reorth", [&reorth]() { reorth = 0; }, "force reorthogonalization off");

  CLI::App *pre = app.add_subcommand("preset", "run a named figure preset");
  pre->add_option("name", preset_name,
                  "fig1-left|fig1-right|fig2-left|fig2-right|fig3-left|fig3-right|sharpness-<k>")
      ->required();
  pre->add_option("--mm-path", mm_path, "Matrix Market file for the -right presets");
  pre->add_option("--out", out_dir, "output directory");
  pre->add_option("--k-max", k_max, "iteration cap");
  pre->add_flag("--no-plots", no_plots, "skip SVG output");

  CLI::App *sharp = app.add_subcommand("sharpness", "run the equality instance for iteration k");
  sharp->add_option("k", sharpness_k, "iteration at which the bound is attained")->required();
  sharp->add_option("--out", out_dir, "output directory");

  CLI::App *verify = app.add_subcommand("verify", "run the checks of a config, write nothing");
  verify->add_option("config", config_path, "JSON config file")->required();
  verify->add_option("--k-max", k_max, "iteration cap (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    krylab::ExperimentConfig cfg;
    bool write_outputs = true;

    if (run->parsed()) {
      cfg = krylab::load_config_file(config_path);
    } else if (pre->parsed()) {
      cfg = krylab::preset(preset_name, mm_path);
      cfg.out_dir = default_out_dir();
    } else if (sharp->parsed()) {
      if (sharpness_k < 1) throw krylab::ConfigError("sharpness: k must be >= 1");
      cfg = krylab::preset("sharpness-" + std::to_string(sharpness_k));
      cfg.out_dir = default_out_dir();
    } else { // verify
      cfg = krylab::load_config_file(config_path);
      write_outputs = false;
    }
    apply_overrides(cfg, out_dir, k_max, no_plots, reorth);

    const krylab::ExperimentResult res = krylab::run_experiment(cfg, write_outputs);
    return report_and_exit_code(res, write_outputs);
  } catch (const krylab::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}
