#ifndef ICP_ORACLE_HPP
#define ICP_ORACLE_HPP

#include <cmath>
#include <vector>

#include "icp/dense_matrix.hpp"
#include "icp/problem.hpp"

namespace icp {

/// Brute-force active-set enumeration for tiny affine instances. For each
/// subset S of rows, impose (Az+q)_i = 0 on S and ((I-C)z - d)_i = 0 off S,
/// solve the dense system and keep candidates feasible within tol. Results
/// are deduplicated (1e-8 inf-norm) and ordered by subset bitmask, so the
/// output is deterministic.
inline std::vector<DenseVector> enumerate_icp(const IcpProblem& p,
                                              double tol = 1e-9) {
  const std::size_t n = p.size();
  if (n > 12) throw SizeError("enumerate_icp: n > 12");

  const DenseMatrix a = DenseMatrix::from_sparse(p.a);
  DenseMatrix i_minus_c = DenseMatrix::identity(n);
  for (const Triplet& t : p.zeta.c().triplets())
    i_minus_c(t.row, t.col) -= t.value;

  std::vector<DenseVector> solutions;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    DenseMatrix sys(n);
    DenseVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool active = mask & (std::size_t{1} << i);
      for (std::size_t j = 0; j < n; ++j)
        sys(i, j) = active ? a(i, j) : i_minus_c(i, j);
      rhs[i] = active ? -p.q[i] : p.zeta.d()[i];
    }
    DenseVector z;
    try {
      z = DenseLu(sys).solve(rhs);
    } catch (const SingularMatrixError&) {
      continue;  // degenerate subset, skip
    }
    const DenseVector w = p.w(z);
    const DenseVector s = p.s(z);
    bool feasible = true;
    for (std::size_t i = 0; i < n && feasible; ++i)
      feasible = w[i] >= -tol && s[i] >= -tol;
    if (!feasible) continue;

    bool duplicate = false;
    for (const DenseVector& known : solutions) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        d = std::max(d, std::abs(known[i] - z[i]));
      if (d < 1e-8) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) solutions.push_back(std::move(z));
  }
  return solutions;
}

class UniquenessViolation : public Error {
 public:
  explicit UniquenessViolation(const std::string& msg) : Error(msg) {}
};

inline DenseVector oracle_unique_solution(const IcpProblem& p,
                                          double tol = 1e-9) {
  std::vector<DenseVector> sols = enumerate_icp(p, tol);
  if (sols.size() != 1)
    throw UniquenessViolation("oracle_unique_solution: found " +
                              std::to_string(sols.size()) + " solutions");
  return sols.front();
}

}  // namespace icp

#endif  // ICP_ORACLE_HPP
