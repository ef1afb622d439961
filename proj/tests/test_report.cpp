#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "krylab/csv.hpp"
#include "krylab/experiment.hpp"
#include "krylab/svgplot.hpp"
#include "oracles.hpp"

using namespace krylab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string &tag) {
  const fs::path p = fs::temp_directory_path() / ("krylab_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("format_double is shortest round-trip") {
  for (double v : {0.5, 1.0 / 3.0, 1e-300, 123456.75, -0.1}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("history csv layout and the inf token") {
  // the 2x2 swap operator gives an INFINITE FOM entry at k = 1
  DenseMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const LinearOperator a = LinearOperator::from_dense(m);
  const ConvergenceHistory h = run_history(a, {1.0, 0.0}, 2);
  const BoundReport rep = check_main_bound(h);
  const std::string csv = render_history_csv(h, rep);

  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,fom_direct,fom_theta,gmres_direct,gmres_theta,fom_best_so_far,bound_sqrt_k1_gmres,ratio");
  std::string row1, row2;
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(row2.find("inf") != std::string::npos);

  // re-parsed csv reproduces the in-memory norms exactly
  std::istringstream back(csv);
  const CsvTable table = parse_csv(back);
  REQUIRE(table.rows.size() == h.records.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i][1] == h.records[i].fom_direct.numeric());
    CHECK(table.rows[i][3] == h.records[i].gmres_direct);
  }
}

TEST_CASE("csv is deterministic and atomic writes land") {
  const PrescribedInstance inst = build_prescribed_instance({1.0, 2.0, 0.5});
  const LinearOperator op = inst.op();
  const ConvergenceHistory h = run_history(op, inst.b, 3);
  const BoundReport rep = check_main_bound(h);
  const std::string a = render_history_csv(h, rep);
  const std::string b = render_history_csv(h, rep);
  CHECK(a == b);

  const fs::path dir = temp_dir("atomic");
  write_file_atomic((dir / "x.csv").string(), a);
  CHECK(slurp(dir / "x.csv") == a);
  CHECK_FALSE(fs::exists(dir / "x.csv.tmp"));
}

TEST_CASE("single-record history serializes as header plus one row") {
  // k_max = 0 produces only the k = 0 record
  const LinearOperator a = random_sparse_operator(6, 0.3, 4);
  const ConvergenceHistory h = run_history(a, ones_vector(6), 0);
  const BoundReport rep = check_main_bound(h);
  const std::string csv = render_history_csv(h, rep);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("svg basics: constant series, gaps, legend") {
  const std::string svg = render_svg({{"flat", {1.0, 1.0, 1.0}, LineStyle::Solid, ""}}, false);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("flat") != std::string::npos);

  // an infinite entry splits the curve into two polylines
  const double inf = std::numeric_limits<double>::infinity();
  const std::string gap =
      render_svg({{"gappy", {1.0, 2.0, inf, 3.0, 4.0}, LineStyle::Solid, ""}}, false);
  std::size_t count = 0;
  for (std::size_t pos = gap.find("<polyline"); pos != std::string::npos;
       pos = gap.find("<polyline", pos + 1)) {
    ++count;
  }
  CHECK(count == 2);

  // nonpositive values are skipped under a log scale, not errors
  const std::string logy = render_svg({{"s", {1.0, -1.0, 4.0}, LineStyle::Dashed, ""}}, true);
  CHECK(logy.find("polyline") != std::string::npos);

  CHECK_THROWS_AS(render_svg({}, false), InvalidInputError);
  CHECK_THROWS_AS(render_svg({{"empty", {}, LineStyle::Solid, ""}}, false), InvalidInputError);
}

TEST_CASE("fig2 preset plot carries the four figure roles") {
  const fs::path dir = temp_dir("fig2roles");
  ExperimentConfig cfg = preset("fig2-left");
  cfg.k_max = 12; // keep the unit test quick; the acceptance suite runs the full preset
  cfg.out_dir = dir.string();
  run_experiment(cfg);
  const std::string svg = slurp(dir / "residuals.svg");
  for (const char *role : {"best FOM so far", "bound", "FOM", "GMRES"}) {
    CHECK(svg.find(role) != std::string::npos);
  }
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("presets") {
  const ExperimentConfig s3 = preset("sharpness-3");
  const auto *p = std::get_if<PrescribedSource>(&s3.problem);
  REQUIRE(p != nullptr);
  CHECK(p->f == Vector(4, 1.0));
  CHECK(s3.k_max == 3);

  const ExperimentConfig f1 = preset("fig1-left");
  const auto *sp = std::get_if<SpectrumSource>(&f1.problem);
  REQUIRE(sp != nullptr);
  REQUIRE(sp->spec.intervals.size() == 2);
  CHECK(sp->spec.intervals[0].lo == -10.0);
  CHECK(sp->spec.intervals[0].hi == -1.0);
  CHECK(sp->spec.intervals[0].count == 250);
  CHECK(sp->spec.intervals[1].lo == 1.0);
  CHECK(sp->spec.intervals[1].hi == 20.0);
  CHECK(sp->spec.intervals[1].count == 250);
  CHECK(f1.k_max == 80);

  CHECK(preset("fig3-left").with_errors);
  CHECK_FALSE(preset("fig2-left").with_errors);
  CHECK(std::holds_alternative<MatrixMarketSource>(preset("fig1-right", "/tmp/m.mtx").problem));

  CHECK_THROWS_AS(preset("fig9"), ConfigError);
  CHECK_THROWS_AS(preset("fig1-right"), ConfigError); // needs a path
  CHECK_THROWS_AS(preset("sharpness-0"), ConfigError);
}

TEST_CASE("config json parsing") {
  const ExperimentConfig cfg = parse_config(R"({
    "problem": {"type": "spectrum", "intervals": [{"min": 1, "max": 4, "count": 8}]},
    "rhs": "e1",
    "k_max": 5,
    "reorthogonalize": false,
    "tolerances": {"identity": 1e-7},
    "with_errors": true,
    "out_dir": "/tmp/somewhere",
    "plots": false
  })");
  CHECK(std::holds_alternative<SpectrumSource>(cfg.problem));
  CHECK(std::holds_alternative<RhsE1>(cfg.rhs));
  CHECK(cfg.k_max == 5);
  CHECK_FALSE(cfg.reorthogonalize);
  CHECK(cfg.tol.identity == 1e-7);
  CHECK(cfg.tol.breakdown == 1e-12); // default kept
  CHECK(cfg.with_errors);
  CHECK_FALSE(cfg.plots);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "nope"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "prescribed", "f": []}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"problem": {"type": "spectrum", "intervals": [{"min":0,"max":1,"count":0}]}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"problem": {"type":"prescribed","f":[1]}, "tolerances": {"identity": -1}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"type":"prescribed","f":[1]}, "rhs": "weird"})"),
                  ConfigError);
}

TEST_CASE("run_experiment end to end on the sharpness preset") {
  const fs::path dir = temp_dir("sharp");
  ExperimentConfig cfg = preset("sharpness-5");
  cfg.out_dir = dir.string();
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.all_checks_passed);
  REQUIRE(fs::exists(dir / "history.csv"));
  REQUIRE(fs::exists(dir / "residuals.svg"));

  const CsvTable table = parse_csv_file((dir / "history.csv").string());
  const std::size_t ratio_col = 7;
  REQUIRE(table.header[ratio_col] == "ratio");
  REQUIRE(table.rows.size() == 6);
  for (const auto &row : table.rows) {
    CHECK(std::abs(row[ratio_col] - 1.0) <= 1e-12);
  }

  // identical config, byte-identical output
  const std::string first = slurp(dir / "history.csv");
  run_experiment(cfg);
  CHECK(slurp(dir / "history.csv") == first);
}

TEST_CASE("run_experiment verify mode writes nothing") {
  const fs::path dir = temp_dir("verify");
  ExperimentConfig cfg = preset("sharpness-2");
  cfg.out_dir = dir.string();
  const ExperimentResult res = run_experiment(cfg, /*write_outputs=*/false);
  CHECK(res.all_checks_passed);
  CHECK(res.files_written.empty());
  CHECK_FALSE(fs::exists(dir / "history.csv"));
}

TEST_CASE("run_experiment with matrix market input and error stage") {
  const fs::path dir = temp_dir("mm");
  {
    std::ofstream mm(dir / "small.mtx");
    mm << "%%MatrixMarket matrix coordinate real symmetric\n";
    mm << "4 4 7\n";
    mm << "1 1 5\n2 2 6\n3 3 7\n4 4 8\n2 1 1\n3 2 1\n4 3 1\n";
  }
  ExperimentConfig cfg;
  cfg.problem = MatrixMarketSource{(dir / "small.mtx").string()};
  cfg.rhs = RhsOnes{};
  cfg.k_max = 4;
  cfg.with_errors = true;
  cfg.out_dir = (dir / "out").string();
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.all_checks_passed);
  REQUIRE(res.error_report.has_value());
  CHECK(res.error_report->pass);
  const CsvTable table = parse_csv_file((dir / "out" / "history.csv").string());
  CHECK(table.header.size() == 13); // error columns appended
  REQUIRE(fs::exists(dir / "out" / "errors.svg"));
}

TEST_CASE("run_experiment matfunc stage on an SPD spectrum") {
  const fs::path dir = temp_dir("mf");
  ExperimentConfig cfg;
  SpectrumSpec spec;
  spec.intervals.push_back({1.0, 20.0, 20});
  cfg.problem = SpectrumSource{spec};
  cfg.k_max = 20;
  cfg.with_matfunc = true;
  cfg.out_dir = dir.string();
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.matfunc.has_value());
  CHECK(res.matfunc->quad_certified_rel_error <= 1e-8);
  REQUIRE(fs::exists(dir / "matfunc.csv"));
  REQUIRE(fs::exists(dir / "matfunc.svg"));

  // an indefinite operator cannot run the matfunc stage
  ExperimentConfig bad = cfg;
  SpectrumSpec indef;
  indef.intervals.push_back({-2.0, -1.0, 4});
  indef.intervals.push_back({1.0, 2.0, 4});
  bad.problem = SpectrumSource{indef};
  CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("missing input file surfaces as an IoError naming the path") {
  ExperimentConfig cfg;
  cfg.problem = MatrixMarketSource{"/nonexistent/steam2.mtx"};
  try {
    run_experiment(cfg);
    FAIL("expected IoError");
  } catch (const IoError &e) {
    CHECK(std::string(e.what()).find("/nonexistent/steam2.mtx") != std::string::npos);
  }
}

TEST_CASE("random sparse problem source is deterministic per seed") {
  ExperimentConfig cfg;
  cfg.problem = RandomSparseSource{30, 0.1, 99};
  cfg.k_max = 10;
  cfg.plots = false;
  const fs::path dir = temp_dir("seeded");
  cfg.out_dir = dir.string();
  run_experiment(cfg);
  const std::string first = slurp(dir / "history.csv");
  run_experiment(cfg);
  CHECK(slurp(dir / "history.csv") == first);
}
