#include "lrsplit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "lrsplit/errors.hpp"

namespace lrsplit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line, long& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

MatrixMarketData load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);

  long lineno = 0;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;

  std::istringstream header(lower(line));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    throw ParseError("missing '%%MatrixMarket matrix' banner", lineno);
  if (format != "coordinate" && format != "array")
    throw ParseError("unsupported format '" + format + "' (coordinate or array)", lineno);
  if (field != "real")
    throw ParseError("unsupported field '" + field + "' (real only)", lineno);
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("unsupported symmetry '" + symmetry + "' (general or symmetric)", lineno);

  const bool coordinate = format == "coordinate";
  const bool symmetric = symmetry == "symmetric";

  if (!next_data_line(in, line, lineno)) throw ParseError("missing size line", lineno + 1);
  std::istringstream size_line(line);
  Index rows = 0, cols = 0;
  long nnz = 0;
  if (coordinate) {
    if (!(size_line >> rows >> cols >> nnz))
      throw ParseError("size line must be 'rows cols nnz'", lineno);
  } else {
    if (!(size_line >> rows >> cols))
      throw ParseError("size line must be 'rows cols'", lineno);
  }
  if (rows < 1 || cols < 1) throw ParseError("dimensions must be positive", lineno);
  if (symmetric && rows != cols) throw ParseError("symmetric matrix must be square", lineno);

  std::vector<Eigen::Triplet<double>> entries;
  if (coordinate) {
    entries.reserve(static_cast<size_t>(symmetric ? 2 * nnz : nnz));
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line, lineno))
        throw ParseError("expected " + std::to_string(nnz) + " entries, got " +
                             std::to_string(k),
                         lineno + 1);
      std::istringstream entry(line);
      Index i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) throw ParseError("entry must be 'i j value'", lineno);
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError("entry index out of range", lineno);
      entries.emplace_back(i - 1, j - 1, v);
      if (symmetric && i != j) entries.emplace_back(j - 1, i - 1, v);
    }
  } else {
    // Array format: column-major dense values; symmetric files store the
    // lower triangle (including the diagonal) only.
    const auto read_value = [&](Index i, Index j) {
      if (!next_data_line(in, line, lineno))
        throw ParseError("array data ended early", lineno + 1);
      std::istringstream entry(line);
      double v = 0.0;
      if (!(entry >> v)) throw ParseError("array entry must be a real number", lineno);
      if (v != 0.0) {
        entries.emplace_back(i, j, v);
        if (symmetric && i != j) entries.emplace_back(j, i, v);
      }
    };
    for (Index j = 0; j < cols; ++j)
      for (Index i = symmetric ? j : 0; i < rows; ++i) read_value(i, j);
  }

  MatrixMarketData data;
  data.symmetric = symmetric;
  data.matrix.resize(rows, cols);
  data.matrix.setFromTriplets(entries.begin(), entries.end());
  data.matrix.makeCompressed();
  return data;
}

void save_matrix_market(const std::string& path, const DenseMatrix& M) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_matrix_market: cannot open '" + path + "'");
  long nnz = 0;
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i)
      if (M(i, j) != 0.0) ++nnz;
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << " " << M.cols() << " " << nnz << "\n";
  char buf[64];
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) {
      if (M(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
    }
  }
}

}  // namespace lrsplit
