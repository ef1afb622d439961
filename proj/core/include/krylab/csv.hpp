#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "krylab/bounds.hpp"
#include "krylab/matfunc.hpp"

namespace krylab {

/// Shortest decimal that round-trips to the same double (std::to_chars);
/// the INFINITE marker and undefined ratios serialize as "inf" and "nan".
std::string format_double(double v);

/// One row per iteration: k, fom_direct, fom_theta, gmres_direct,
/// gmres_theta, fom_best_so_far, bound_sqrt_k1_gmres, ratio, and the error
/// columns when the history carries them. Deterministic byte output,
/// UTF-8, LF line endings.
std::string render_history_csv(const ConvergenceHistory &h, const BoundReport &bound,
                               const ErrorReport *errors = nullptr);

std::string render_matfunc_csv(const MatFuncReport &rep);

/// Writes content through a temp file in the same directory + rename.
void write_file_atomic(const std::string &path, const std::string &content);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows; // "inf" -> +infinity, "nan" -> NaN
};

CsvTable parse_csv(std::istream &in);
CsvTable parse_csv_file(const std::string &path);

} // namespace krylab
