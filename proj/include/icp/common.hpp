#ifndef ICP_COMMON_HPP
#define ICP_COMMON_HPP

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace icp {

using DenseVector = std::vector<double>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(const std::string& msg) : Error(msg) {}
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& msg) : Error(msg) {}
};

/// Dimension cap for dense certificate machinery (inverse, classifiers).
/// Overridable through the ICP_CERT_MAX_N environment variable.
inline std::size_t cert_max_n() {
  if (const char* s = std::getenv("ICP_CERT_MAX_N")) {
    long v = std::strtol(s, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 200;
}

inline void check_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b)
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
}

inline double norm2(const DenseVector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double norm_inf(const DenseVector& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline DenseVector vec_abs(const DenseVector& x) {
  DenseVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::abs(x[i]);
  return r;
}

/// Positive (or unrestricted, for the relaxation parameter) diagonal matrix.
struct DiagonalMatrix {
  std::size_t n = 0;
  DenseVector values;

  DiagonalMatrix() = default;
  DiagonalMatrix(std::size_t n_, DenseVector v) : n(n_), values(std::move(v)) {
    check_dim(n, values.size(), "DiagonalMatrix");
  }

  static DiagonalMatrix scalar(std::size_t n, double s) {
    return DiagonalMatrix(n, DenseVector(n, s));
  }
  static DiagonalMatrix identity(std::size_t n) { return scalar(n, 1.0); }

  bool all_positive() const {
    for (double v : values)
      if (!(v > 0.0)) return false;
    return true;
  }

  DenseVector apply(const DenseVector& x) const {
    check_dim(n, x.size(), "DiagonalMatrix::apply");
    DenseVector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = values[i] * x[i];
    return r;
  }
};

}  // namespace icp

#endif  // ICP_COMMON_HPP
