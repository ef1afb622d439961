#include "krylab/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace krylab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_norm(const ResidualNorm &n) {
  return n.is_infinite() ? "inf" : format_double(n.value());
}

std::string format_ratio(const std::optional<double> &r) {
  return r ? format_double(*r) : "nan";
}

} // namespace

std::string render_history_csv(const ConvergenceHistory &h, const BoundReport &bound,
                               const ErrorReport *errors) {
  if (bound.rows.size() != h.records.size()) {
    throw InvalidInputError("render_history_csv: bound report does not match the history");
  }
  if (errors && errors->rows.size() != h.records.size()) {
    throw InvalidInputError("render_history_csv: error report does not match the history");
  }
  if (errors && !h.with_errors) {
    throw InvalidInputError("render_history_csv: error report supplied but history has no error norms");
  }

  std::string out;
  out += "k,fom_direct,fom_theta,gmres_direct,gmres_theta,fom_best_so_far,bound_sqrt_k1_gmres,ratio";
  if (errors) out += ",fom_error,gmres_error,fom_error_best,error_bound,error_ratio";
  out += "\n";

  for (std::size_t i = 0; i < h.records.size(); ++i) {
    const HistoryRecord &r = h.records[i];
    const BoundRow &b = bound.rows[i];
    out += std::to_string(r.k);
    out += ',';
    out += format_norm(r.fom_direct);
    out += ',';
    out += format_norm(r.fom_theta);
    out += ',';
    out += format_double(r.gmres_direct);
    out += ',';
    out += format_double(r.gmres_theta);
    out += ',';
    out += format_norm(b.fom_best);
    out += ',';
    out += format_double(b.bound);
    out += ',';
    out += format_ratio(b.ratio);
    if (errors) {
      const ErrorRow &e = errors->rows[i];
      out += ',';
      out += format_norm(r.fom_error);
      out += ',';
      out += format_double(r.gmres_error);
      out += ',';
      out += format_norm(e.fom_err_best);
      out += ',';
      out += format_double(e.bound);
      out += ',';
      out += format_ratio(e.ratio);
    }
    out += '\n';
  }
  return out;
}

std::string render_matfunc_csv(const MatFuncReport &rep) {
  std::string out = "k,fa_error,best_krylov_error,ratio\n";
  for (const MatFuncRow &r : rep.rows) {
    out += std::to_string(r.k);
    out += ',';
    out += format_double(r.fa_error);
    out += ',';
    out += format_double(r.best_error);
    out += ',';
    out += format_ratio(r.ratio);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

CsvTable parse_csv(std::istream &in) {
  CsvTable table;
  std::string line;
  int lineno = 0;
  auto split = [](const std::string &s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw ParseError("csv: empty input");
  ++lineno;
  table.header = split(line);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("csv: column count mismatch at line " + std::to_string(lineno));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string &c : cells) {
      if (c == "inf") {
        row.push_back(std::numeric_limits<double>::infinity());
      } else if (c == "-inf") {
        row.push_back(-std::numeric_limits<double>::infinity());
      } else if (c == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        double v = 0.0;
        const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
        if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
          throw ParseError("csv: bad number '" + c + "' at line " + std::to_string(lineno));
        }
        row.push_back(v);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable parse_csv_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv file: " + path);
  return parse_csv(in);
}

} // namespace krylab
