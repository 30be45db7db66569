#ifndef ICP_DENSE_MATRIX_HPP
#define ICP_DENSE_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "icp/sparse_matrix.hpp"

namespace icp {

/// Row-major square dense matrix, used only for desk-scale certificate work.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix from_sparse(const SparseMatrix& a) {
    DenseMatrix m(a.size());
    for (const Triplet& t : a.triplets()) m(t.row, t.col) = t.value;
    return m;
  }

  static DenseMatrix from_diagonal(const DiagonalMatrix& d) {
    DenseMatrix m(d.n);
    for (std::size_t i = 0; i < d.n; ++i) m(i, i) = d.values[i];
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  DenseMatrix abs() const {
    DenseMatrix r(n_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      r.data_[i] = std::abs(data_[i]);
    return r;
  }

  bool nonnegative() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return v >= 0.0; });
  }

  double norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  DenseVector matvec(const DenseVector& x) const {
    check_dim(n_, x.size(), "DenseMatrix::matvec");
    DenseVector y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  DenseVector matvec_transpose(const DenseVector& x) const {
    check_dim(n_, x.size(), "DenseMatrix::matvec_transpose");
    DenseVector y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) y[j] += (*this)(i, j) * x[i];
    return y;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    check_dim(a.n_, b.n_, "DenseMatrix::operator*");
    DenseMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    check_dim(a.n_, b.n_, "DenseMatrix::operator+");
    DenseMatrix c(a.n_);
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      c.data_[i] = a.data_[i] + b.data_[i];
    return c;
  }

  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    check_dim(a.n_, b.n_, "DenseMatrix::operator-");
    DenseMatrix c(a.n_);
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      c.data_[i] = a.data_[i] - b.data_[i];
    return c;
  }

  friend DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix c(a.n_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = s * a.data_[i];
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting. Pivots below 1e-14 * ||A||_inf
/// are treated as singular.
class DenseLu {
 public:
  explicit DenseLu(const DenseMatrix& a) : lu_(a), piv_(a.size()) {
    const std::size_t n = a.size();
    const double thresh = 1e-14 * std::max(a.norm_inf(), 1e-300);
    std::iota(piv_.begin(), piv_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (std::abs(lu_(p, k)) < thresh)
        throw SingularMatrixError("DenseLu: pivot below threshold at column " +
                                  std::to_string(k));
      if (p != k) {
        std::swap(piv_[p], piv_[k]);
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        const double f = lu_(i, k);
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  DenseVector solve(const DenseVector& b) const {
    const std::size_t n = lu_.size();
    check_dim(n, b.size(), "DenseLu::solve");
    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[piv_[i]];
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
      x[ii] /= lu_(ii, ii);
    }
    return x;
  }

  DenseMatrix inverse() const {
    const std::size_t n = lu_.size();
    DenseMatrix inv(n);
    DenseVector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      DenseVector col = solve(e);
      e[j] = 0.0;
      for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
};

inline DenseMatrix dense_inverse(const DenseMatrix& a) {
  if (a.size() > cert_max_n())
    throw SizeError("dense_inverse: n=" + std::to_string(a.size()) +
                    " exceeds bound " + std::to_string(cert_max_n()));
  return DenseLu(a).inverse();
}

inline DenseMatrix dense_inverse(const SparseMatrix& a) {
  return dense_inverse(DenseMatrix::from_sparse(a));
}

struct SpectralRadius {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;

  operator double() const { return value; }
};

/// Perron-root estimate for an entrywise nonnegative matrix: power iteration
/// on A + eps*I started from the all-ones vector, eps = 1e-12 to get past
/// reducible stalls. The shift is subtracted from the returned estimate.
inline SpectralRadius spectral_radius_nonneg(const DenseMatrix& a,
                                             double tol = 1e-10,
                                             std::size_t max_iter = 100000) {
  if (!a.nonnegative())
    throw Error("spectral_radius_nonneg: matrix has negative entries");
  const std::size_t n = a.size();
  const double eps = 1e-12;
  SpectralRadius out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  DenseVector v(n, 1.0);
  double lambda = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    DenseVector w = a.matvec(v);
    for (std::size_t i = 0; i < n; ++i) w[i] += eps * v[i];
    double vv = 0.0, vw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      vv += v[i] * v[i];
      vw += v[i] * w[i];
    }
    const double next = vw / vv;
    const double nw = norm2(w);
    if (nw == 0.0) {
      // iterate annihilated, radius is (numerically) the shift alone
      out.value = 0.0;
      out.converged = true;
      out.iterations = it;
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (std::abs(next - lambda) <= tol * std::max(std::abs(next), 1.0)) {
      out.value = std::max(next - eps, 0.0);
      out.converged = true;
      out.iterations = it;
      return out;
    }
    lambda = next;
  }
  out.value = std::max(lambda - eps, 0.0);
  out.converged = false;
  out.iterations = max_iter;
  return out;
}

inline SpectralRadius spectral_radius_nonneg(const SparseMatrix& a,
                                             double tol = 1e-10,
                                             std::size_t max_iter = 100000) {
  return spectral_radius_nonneg(DenseMatrix::from_sparse(a), tol, max_iter);
}

/// Matrix 2-norm: sqrt of the Perron root of G^T G (G^T G is nonnegative-
/// definite and the power iteration on it is run with symmetric products).
inline double norm2_matrix(const DenseMatrix& g, double tol = 1e-14,
                           std::size_t max_iter = 1000000) {
  const std::size_t n = g.size();
  if (n == 0) return 0.0;
  // deterministic non-uniform start: the all-ones vector can be exactly
  // orthogonal to the dominant singular vector (e.g. [[3,-1],[-1,3]])
  DenseVector v(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 1.0 + static_cast<double>(i + 1) / static_cast<double>(n);
  double nv = norm2(v);
  for (std::size_t i = 0; i < n; ++i) v[i] /= nv;
  double lambda = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    DenseVector w = g.matvec_transpose(g.matvec(v));
    double next = 0.0;
    for (std::size_t i = 0; i < n; ++i) next += v[i] * w[i];
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (std::abs(next - lambda) <= tol * std::max(std::abs(next), 1.0))
      return std::sqrt(std::max(next, 0.0));
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace icp

#endif  // ICP_DENSE_MATRIX_HPP
