#ifndef ICP_PROBLEM_HPP
#define ICP_PROBLEM_HPP

#include <algorithm>
#include <cmath>
#include <utility>

#include "icp/sparse_matrix.hpp"

namespace icp {

/// Affine implicit map zeta(z) = C z + d together with a Lipschitz matrix
/// Psi >= |C| (componentwise |zeta(x)-zeta(y)| <= Psi |x-y|).
class ImplicitMap {
 public:
  ImplicitMap() = default;

  ImplicitMap(SparseMatrix c, DenseVector d, SparseMatrix psi)
      : c_(std::move(c)), d_(std::move(d)), psi_(std::move(psi)) {
    check_dim(c_.size(), d_.size(), "ImplicitMap");
    check_dim(c_.size(), psi_.size(), "ImplicitMap(psi)");
    if (!psi_.nonnegative())
      throw Error("ImplicitMap: Lipschitz matrix must be nonnegative");
    // Psi >= |C| entrywise makes the Lipschitz bound actually hold.
    for (const Triplet& t : c_.triplets())
      if (psi_.at(t.row, t.col) < std::abs(t.value) - 1e-15)
        throw Error("ImplicitMap: psi < |C| at (" + std::to_string(t.row) +
                    "," + std::to_string(t.col) + ")");
  }

  /// Default Lipschitz matrix Psi = |C|.
  ImplicitMap(SparseMatrix c, DenseVector d)
      : ImplicitMap(c, std::move(d), abs_matrix(c)) {}

  /// The zero map (LCP reduction).
  static ImplicitMap zero(std::size_t n) {
    return ImplicitMap(SparseMatrix::zero(n), DenseVector(n, 0.0),
                       SparseMatrix::zero(n));
  }

  std::size_t size() const { return c_.size(); }
  const SparseMatrix& c() const { return c_; }
  const DenseVector& d() const { return d_; }
  const SparseMatrix& psi() const { return psi_; }

  bool is_zero() const {
    return c_.nnz() == 0 && std::all_of(d_.begin(), d_.end(),
                                        [](double v) { return v == 0.0; });
  }

  DenseVector apply(const DenseVector& z) const {
    check_dim(size(), z.size(), "ImplicitMap::apply");
    DenseVector r = c_.matvec(z);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += d_[i];
    return r;
  }

 private:
  SparseMatrix c_;
  DenseVector d_;
  SparseMatrix psi_;
};

inline DenseVector apply_zeta(const ImplicitMap& m, const DenseVector& z) {
  return m.apply(z);
}

/// ICP(q, A, zeta): find z with Az+q >= 0, z-zeta(z) >= 0 and
/// (z-zeta(z))^T (Az+q) = 0.
struct IcpProblem {
  SparseMatrix a;
  DenseVector q;
  ImplicitMap zeta;

  IcpProblem(SparseMatrix a_, DenseVector q_, ImplicitMap z_)
      : a(std::move(a_)), q(std::move(q_)), zeta(std::move(z_)) {
    check_dim(a.size(), q.size(), "IcpProblem");
    check_dim(a.size(), zeta.size(), "IcpProblem(zeta)");
  }

  IcpProblem(SparseMatrix a_, DenseVector q_)
      : a(std::move(a_)), q(std::move(q_)), zeta(ImplicitMap::zero(a.size())) {
    check_dim(a.size(), q.size(), "IcpProblem");
  }

  std::size_t size() const { return a.size(); }

  DenseVector w(const DenseVector& z) const {  // Az + q
    DenseVector r = a.matvec(z);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += q[i];
    return r;
  }

  DenseVector s(const DenseVector& z) const {  // z - zeta(z)
    DenseVector zz = zeta.apply(z);
    DenseVector r(z.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = z[i] - zz[i];
    return r;
  }
};

/// Res(z) = || min(Az+q, z-zeta(z)) ||_2, the natural stopping residual.
inline double residual(const IcpProblem& p, const DenseVector& z) {
  const DenseVector w = p.w(z);
  const DenseVector s = p.s(z);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double m = std::min(w[i], s[i]);
    acc += m * m;
  }
  return std::sqrt(acc);
}

/// All three conditions of the complementarity system within tolerance.
/// The complementarity term is scaled by (1 + ||q||_2) for q-scale
/// invariance.
inline bool is_solution(const IcpProblem& p, const DenseVector& z,
                        double tol) {
  if (!(tol > 0.0)) throw Error("is_solution: tol must be positive");
  const DenseVector w = p.w(z);
  const DenseVector s = p.s(z);
  double dot = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < -tol || s[i] < -tol) return false;
    dot += s[i] * w[i];
  }
  return std::abs(dot) <= tol * (1.0 + norm2(p.q));
}

}  // namespace icp

#endif  // ICP_PROBLEM_HPP
