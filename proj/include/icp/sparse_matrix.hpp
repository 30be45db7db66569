#ifndef ICP_SPARSE_MATRIX_HPP
#define ICP_SPARSE_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "icp/common.hpp"

namespace icp {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square real matrix in canonical compressed sparse row form:
/// strictly increasing column indices per row, no stored zeros.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(std::size_t n,
                                    const std::vector<Triplet>& entries) {
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const Triplet& t : entries) {
      if (t.row >= n || t.col >= n)
        throw SizeError("from_triplets: index (" + std::to_string(t.row) +
                        "," + std::to_string(t.col) + ") out of range for n=" +
                        std::to_string(n));
      acc[{t.row, t.col}] += t.value;
    }
    SparseMatrix m;
    m.n_ = n;
    m.row_offsets_.assign(n + 1, 0);
    for (const auto& [rc, v] : acc) {
      if (v == 0.0) continue;  // summed to exact zero, drop
      m.col_indices_.push_back(rc.second);
      m.values_.push_back(v);
      ++m.row_offsets_[rc.first + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
      m.row_offsets_[i + 1] += m.row_offsets_[i];
    return m;
  }

  static SparseMatrix identity(std::size_t n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, t);
  }

  static SparseMatrix zero(std::size_t n) { return from_triplets(n, {}); }

  static SparseMatrix from_diagonal(const DiagonalMatrix& d) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d.n; ++i)
      if (d.values[i] != 0.0) t.push_back({i, i, d.values[i]});
    return from_triplets(d.n, t);
  }

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  /// Stored value at (i,j), zero if not stored.
  double at(std::size_t i, std::size_t j) const {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] == j) return values_[k];
      if (col_indices_[k] > j) break;
    }
    return 0.0;
  }

  DenseVector matvec(const DenseVector& x) const {
    check_dim(n_, x.size(), "matvec");
    DenseVector y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        s += values_[k] * x[col_indices_[k]];
      y[i] = s;
    }
    return y;
  }

  /// Entrywise map preserving the pattern (zeros may appear and are dropped).
  template <class F>
  SparseMatrix map_values(F&& f) const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        t.push_back({i, col_indices_[k], f(i, col_indices_[k], values_[k])});
    return from_triplets(n_, t);
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        t.push_back({i, col_indices_[k], values_[k]});
    return t;
  }

  double norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        s += std::abs(values_[k]);
      m = std::max(m, s);
    }
    return m;
  }

  bool nonnegative() const {
    for (double v : values_)
      if (v < 0.0) return false;
    return true;
  }

  bool operator==(const SparseMatrix& o) const {
    return n_ == o.n_ && row_offsets_ == o.row_offsets_ &&
           col_indices_ == o.col_indices_ && values_ == o.values_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

inline SparseMatrix csr_from_triplets(std::size_t n,
                                      const std::vector<Triplet>& entries) {
  return SparseMatrix::from_triplets(n, entries);
}

inline DenseVector matvec(const SparseMatrix& a, const DenseVector& x) {
  return a.matvec(x);
}

/// A = D - L - U with L, U holding the negated strict lower/upper entries.
struct DluParts {
  DiagonalMatrix d;
  SparseMatrix l;
  SparseMatrix u;
};

inline DluParts extract_dlu(const SparseMatrix& a) {
  const std::size_t n = a.size();
  DenseVector diag(n, 0.0);
  std::vector<Triplet> lo, up;
  for (const Triplet& t : a.triplets()) {
    if (t.row == t.col)
      diag[t.row] = t.value;
    else if (t.row > t.col)
      lo.push_back({t.row, t.col, -t.value});
    else
      up.push_back({t.row, t.col, -t.value});
  }
  return {DiagonalMatrix(n, std::move(diag)),
          SparseMatrix::from_triplets(n, lo),
          SparseMatrix::from_triplets(n, up)};
}

inline SparseMatrix comparison_matrix(const SparseMatrix& a) {
  return a.map_values([](std::size_t i, std::size_t j, double v) {
    return i == j ? std::abs(v) : -std::abs(v);
  });
}

inline SparseMatrix abs_matrix(const SparseMatrix& a) {
  return a.map_values(
      [](std::size_t, std::size_t, double v) { return std::abs(v); });
}

inline SparseMatrix sparse_add(const SparseMatrix& a, const SparseMatrix& b,
                               double ca = 1.0, double cb = 1.0) {
  check_dim(a.size(), b.size(), "sparse_add");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  for (Triplet e : a.triplets()) t.push_back({e.row, e.col, ca * e.value});
  for (Triplet e : b.triplets()) t.push_back({e.row, e.col, cb * e.value});
  return SparseMatrix::from_triplets(a.size(), t);
}

/// Right multiplication by a diagonal: column j scaled by d[j].
inline SparseMatrix scale_columns(const SparseMatrix& a,
                                  const DiagonalMatrix& d) {
  check_dim(a.size(), d.n, "scale_columns");
  return a.map_values([&](std::size_t, std::size_t j, double v) {
    return v * d.values[j];
  });
}

inline bool is_lower_triangular(const SparseMatrix& m) {
  for (const Triplet& t : m.triplets())
    if (t.col > t.row) return false;
  return true;
}

inline DenseVector lower_triangular_solve(const SparseMatrix& t,
                                          const DenseVector& b) {
  const std::size_t n = t.size();
  check_dim(n, b.size(), "lower_triangular_solve");
  DenseVector x(n, 0.0);
  const auto& off = t.row_offsets();
  const auto& col = t.col_indices();
  const auto& val = t.values();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    double d = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      if (col[k] == i)
        d = val[k];
      else
        s -= val[k] * x[col[k]];
    }
    if (d == 0.0)
      throw SingularMatrixError("lower_triangular_solve: zero diagonal at row " +
                                std::to_string(i));
    x[i] = s / d;
  }
  return x;
}

}  // namespace icp

#endif  // ICP_SPARSE_MATRIX_HPP
