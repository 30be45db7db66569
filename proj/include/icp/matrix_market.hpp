#ifndef ICP_MATRIX_MARKET_HPP
#define ICP_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "icp/sparse_matrix.hpp"

namespace icp {

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline std::string next_data_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return line;
  }
  throw Error(std::string("matrix market: unexpected end of file reading ") +
              what);
}

}  // namespace detail

/// Coordinate (real, general) writer. Values printed with 17 significant
/// digits so write/read round-trips bit-exactly.
inline void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.size() << " " << a.size() << " " << a.nnz() << "\n";
  for (const Triplet& t : a.triplets())
    out << (t.row + 1) << " " << (t.col + 1) << " " << detail::fmt17(t.value)
        << "\n";
}

inline void write_matrix_market(std::ostream& out, const DenseVector& v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (double x : v) out << detail::fmt17(x) << "\n";
}

inline void write_matrix_market_file(const std::string& path,
                                     const SparseMatrix& a) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  write_matrix_market(f, a);
}

inline void write_matrix_market_file(const std::string& path,
                                     const DenseVector& v) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  write_matrix_market(f, v);
}

inline SparseMatrix read_matrix_market_sparse(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) ||
      detail::lower(header).rfind("%%matrixmarket", 0) != 0)
    throw Error("matrix market: missing header");
  std::istringstream hs(detail::lower(header));
  std::string tag, object, format, field, symmetry;
  hs >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real" ||
      symmetry != "general")
    throw Error("matrix market: expected 'matrix coordinate real general'");

  std::istringstream dims(detail::next_data_line(in, "dimensions"));
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(dims >> rows >> cols >> nnz) || rows != cols)
    throw Error("matrix market: bad dimension line (square matrix required)");

  std::vector<Triplet> t;
  t.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::istringstream ls(detail::next_data_line(in, "entry"));
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v) || i < 1 || j < 1 || i > rows || j > cols)
      throw Error("matrix market: bad entry at line " + std::to_string(k + 1));
    t.push_back({i - 1, j - 1, v});
  }
  return SparseMatrix::from_triplets(rows, t);
}

inline DenseVector read_matrix_market_vector(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) ||
      detail::lower(header).rfind("%%matrixmarket", 0) != 0)
    throw Error("matrix market: missing header");
  std::istringstream hs(detail::lower(header));
  std::string tag, object, format, field, symmetry;
  hs >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "array" || field != "real")
    throw Error("matrix market: expected 'matrix array real'");

  std::istringstream dims(detail::next_data_line(in, "dimensions"));
  std::size_t rows = 0, cols = 0;
  if (!(dims >> rows >> cols) || cols != 1)
    throw Error("matrix market: array with one column required");

  DenseVector v(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    std::istringstream ls(detail::next_data_line(in, "value"));
    if (!(ls >> v[k]))
      throw Error("matrix market: bad value at line " + std::to_string(k + 1));
  }
  return v;
}

inline SparseMatrix read_matrix_market_sparse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open: " + path);
  return read_matrix_market_sparse(f);
}

inline DenseVector read_matrix_market_vector_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open: " + path);
  return read_matrix_market_vector(f);
}

}  // namespace icp

#endif  // ICP_MATRIX_MARKET_HPP
