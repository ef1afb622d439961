#include "krylab/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "krylab/rng.hpp"

namespace krylab {

Vector CsrMatrix::apply(const Vector &v) const {
  if (static_cast<int>(v.size()) != n) throw InvalidInputError("CsrMatrix::apply: dimension mismatch");
  Vector out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    long double acc = 0.0L;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      acc += static_cast<long double>(values[p]) * v[col_idx[p]];
    }
    out[i] = static_cast<double>(acc);
  }
  return out;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) d(i, col_idx[p]) = values[p];
  return d;
}

namespace {

std::string lowercase(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

CsrMatrix csr_from_triplets(int n, std::map<std::pair<int, int>, double> &entries) {
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  for (const auto &[coord, value] : entries) {
    (void)value;
    m.row_ptr[coord.first + 1]++;
  }
  for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  m.col_idx.reserve(entries.size());
  m.values.reserve(entries.size());
  // std::map iterates in (row, col) order, so rows come out sorted by column.
  for (const auto &[coord, value] : entries) {
    m.col_idx.push_back(coord.second);
    m.values.push_back(value);
  }
  return m;
}

} // namespace

CsrMatrix parse_matrix_market(std::istream &in) {
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) throw ParseError("matrix market: empty input");
  ++lineno;
  bool symmetric = false;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, qualifier;
    hs >> banner >> object >> format >> field >> qualifier;
    if (lowercase(banner) != "%%matrixmarket") {
      throw ParseError("matrix market: missing %%MatrixMarket banner on line 1");
    }
    if (lowercase(object) != "matrix" || lowercase(format) != "coordinate" ||
        lowercase(field) != "real" ||
        (lowercase(qualifier) != "general" && lowercase(qualifier) != "symmetric")) {
      throw UnsupportedFormatError(
          "matrix market: only 'matrix coordinate real general|symmetric' is supported, got '" + line + "'");
    }
    symmetric = (lowercase(qualifier) == "symmetric");
  }

  auto next_content_line = [&](std::string &out) -> bool {
    while (std::getline(in, out)) {
      ++lineno;
      std::size_t pos = out.find_first_not_of(" \t\r\n");
      if (pos == std::string::npos) continue;
      if (out[pos] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line(line)) throw ParseError("matrix market: missing size line");
  int rows = 0, cols = 0;
  long nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) {
      throw ParseError("matrix market: malformed size line at line " + std::to_string(lineno));
    }
  }
  if (rows <= 0 || cols <= 0 || nnz < 0) {
    throw ParseError("matrix market: non-positive dimensions at line " + std::to_string(lineno));
  }
  if (rows != cols) {
    throw ParseError("matrix market: operator must be square, got " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " at line " + std::to_string(lineno));
  }

  std::map<std::pair<int, int>, double> entries;
  for (long e = 0; e < nnz; ++e) {
    if (!next_content_line(line)) {
      throw ParseError("matrix market: expected " + std::to_string(nnz) + " entries, input ended after " +
                       std::to_string(e));
    }
    std::istringstream ss(line);
    int i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v)) {
      throw ParseError("matrix market: malformed entry at line " + std::to_string(lineno));
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("matrix market: index out of range at line " + std::to_string(lineno));
    }
    if (!std::isfinite(v)) {
      throw ParseError("matrix market: non-finite value at line " + std::to_string(lineno));
    }
    entries[{i - 1, j - 1}] += v;
    if (symmetric && i != j) entries[{j - 1, i - 1}] += v;
  }

  return csr_from_triplets(rows, entries);
}

CsrMatrix parse_matrix_market_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix market file: " + path);
  return parse_matrix_market(in);
}

int SpectrumSpec::total() const {
  int t = 0;
  for (const auto &iv : intervals) t += iv.count;
  return t;
}

Vector spectrum_points(const SpectrumSpec &spec) {
  if (spec.intervals.empty()) throw InvalidInputError("spectrum: no intervals");
  Vector d;
  for (const auto &iv : spec.intervals) {
    if (iv.count <= 0) throw InvalidInputError("spectrum: interval count must be positive");
    if (iv.hi < iv.lo) throw InvalidInputError("spectrum: empty interval");
    if (iv.count == 1) {
      d.push_back(0.5 * (iv.lo + iv.hi));
      continue;
    }
    const double step = (iv.hi - iv.lo) / (iv.count - 1);
    for (int i = 0; i < iv.count; ++i) d.push_back(iv.lo + i * step);
  }
  return d;
}

LinearOperator LinearOperator::from_csr(CsrMatrix m) {
  LinearOperator op;
  op.kind_ = Kind::Csr;
  op.dim_ = m.n;
  op.rep_ = std::move(m);
  return op;
}

LinearOperator LinearOperator::from_dense(DenseMatrix m) {
  if (m.rows() != m.cols()) throw InvalidInputError("LinearOperator: dense matrix must be square");
  LinearOperator op;
  op.kind_ = Kind::Dense;
  op.dim_ = m.rows();
  op.rep_ = std::move(m);
  return op;
}

LinearOperator LinearOperator::from_diagonal(Vector d) {
  if (d.empty()) throw InvalidInputError("LinearOperator: empty diagonal");
  LinearOperator op;
  op.kind_ = Kind::Diagonal;
  op.dim_ = static_cast<int>(d.size());
  op.rep_ = std::move(d);
  return op;
}

Vector LinearOperator::apply(const Vector &v) const {
  if (static_cast<int>(v.size()) != dim_) throw InvalidInputError("LinearOperator::apply: dimension mismatch");
  switch (kind_) {
    case Kind::Csr:
      return std::get<CsrMatrix>(rep_).apply(v);
    case Kind::Dense:
      return std::get<DenseMatrix>(rep_).apply(v);
    case Kind::Diagonal: {
      const Vector &d = std::get<Vector>(rep_);
      Vector out(dim_);
      for (int i = 0; i < dim_; ++i) out[i] = d[i] * v[i];
      return out;
    }
  }
  throw InvalidStateError("LinearOperator: unknown kind");
}

DenseMatrix LinearOperator::to_dense() const {
  switch (kind_) {
    case Kind::Csr:
      return std::get<CsrMatrix>(rep_).to_dense();
    case Kind::Dense:
      return std::get<DenseMatrix>(rep_);
    case Kind::Diagonal: {
      const Vector &d = std::get<Vector>(rep_);
      DenseMatrix m(dim_, dim_);
      for (int i = 0; i < dim_; ++i) m(i, i) = d[i];
      return m;
    }
  }
  throw InvalidStateError("LinearOperator: unknown kind");
}

const Vector *LinearOperator::diagonal() const {
  if (kind_ != Kind::Diagonal) return nullptr;
  return &std::get<Vector>(rep_);
}

Vector residual_vector(const LinearOperator &a, const Vector &x, const Vector &b) {
  if (x.size() != b.size() || static_cast<int>(x.size()) != a.dim()) {
    throw InvalidInputError("residual_vector: dimension mismatch");
  }
  const Vector ax = a.apply(x); // operator kernels accumulate in long double
  Vector r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    r[i] = static_cast<double>(static_cast<long double>(b[i]) - static_cast<long double>(ax[i]));
  }
  return r;
}

LinearOperator gen_spectrum_operator(const SpectrumSpec &spec) {
  return LinearOperator::from_diagonal(spectrum_points(spec));
}

DenseMatrix random_orthogonal(int n, std::uint64_t seed, int reflections) {
  if (n <= 0) throw InvalidInputError("random_orthogonal: n must be positive");
  if (reflections < 1) throw InvalidInputError("random_orthogonal: need at least one reflection");
  Rng rng(seed);
  DenseMatrix q = DenseMatrix::identity(n);
  Vector u(n);
  for (int r = 0; r < reflections; ++r) {
    for (double &x : u) x = rng.uniform(-1.0, 1.0);
    const double nu = norm2(u);
    for (double &x : u) x /= nu;
    // q <- (I - 2 u u^T) q
    for (int j = 0; j < n; ++j) {
      long double acc = 0.0L;
      for (int i = 0; i < n; ++i) acc += static_cast<long double>(u[i]) * q(i, j);
      const double two_udotq = 2.0 * static_cast<double>(acc);
      for (int i = 0; i < n; ++i) q(i, j) -= two_udotq * u[i];
    }
  }
  return q;
}

RotatedSpectrum gen_rotated_spectrum_operator(const SpectrumSpec &spec, std::uint64_t seed) {
  const Vector d = spectrum_points(spec);
  const int n = static_cast<int>(d.size());
  DenseMatrix q = random_orthogonal(n, seed);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      long double acc = 0.0L;
      for (int k = 0; k < n; ++k) acc += static_cast<long double>(q(i, k)) * d[k] * q(j, k);
      a(i, j) = static_cast<double>(acc);
    }
  }
  return {LinearOperator::from_dense(std::move(a)), std::move(q)};
}

LinearOperator PrescribedInstance::op() const { return LinearOperator::from_dense(a); }

PrescribedInstance build_prescribed_instance(const Vector &f) {
  if (f.empty()) throw InvalidInputError("prescribed instance: f must be nonempty");
  for (double x : f) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidInputError("prescribed instance: every f_j must be positive and finite");
    }
  }
  const int n = static_cast<int>(f.size());

  // theta_{j+1} = f_0 / f_j reproduces the prescribed norms through the
  // residual identities; the matrix realizes them with diagonal entries
  // -theta_{k+1}/theta_k and a unit subdiagonal. A phantom f_n = f_{n-1}
  // closes the pattern, making the last diagonal entry -1 (any nonzero
  // value keeps A nonsingular).
  Vector theta(n + 1);
  theta[0] = 1.0;
  for (int j = 1; j <= n - 1; ++j) theta[j] = f[0] / f[j];
  theta[n] = f[0] / f[n - 1];

  PrescribedInstance inst;
  inst.a = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    inst.a(k, k) = -theta[k + 1] / theta[k];
    if (k + 1 < n) inst.a(k + 1, k) = 1.0;
  }
  inst.b.assign(n, 0.0);
  inst.b[0] = f[0];
  inst.targets = f;
  return inst;
}

Vector ones_vector(int n) {
  if (n < 1) throw InvalidInputError("ones_vector: n must be at least 1");
  return Vector(n, 1.0);
}

Vector unit_vector(int n, int index) {
  if (n < 1 || index < 0 || index >= n) throw InvalidInputError("unit_vector: bad index");
  Vector e(n, 0.0);
  e[index] = 1.0;
  return e;
}

LinearOperator random_sparse_operator(int n, double density, std::uint64_t seed) {
  if (n <= 0) throw InvalidInputError("random_sparse_operator: n must be positive");
  if (density <= 0.0 || density > 1.0) throw InvalidInputError("random_sparse_operator: density in (0,1]");
  Rng rng(seed);
  std::map<std::pair<int, int>, double> entries;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.next_double() < density) entries[{i, j}] = rng.uniform(-1.0, 1.0);
    }
  }
  // Shift the diagonal past the expected off-diagonal row mass so the
  // operator stays well away from singular.
  const double shift = 2.0 + density * n;
  for (int i = 0; i < n; ++i) entries[{i, i}] = shift + rng.uniform(0.0, 1.0);
  return LinearOperator::from_csr(csr_from_triplets(n, entries));
}

LinearOperator random_dense_operator(int n, std::uint64_t seed) {
  if (n <= 0) throw InvalidInputError("random_dense_operator: n must be positive");
  Rng rng(seed);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  return LinearOperator::from_dense(std::move(a));
}

} // namespace krylab
