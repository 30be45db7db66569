#ifndef ICP_GENERATORS_HPP
#define ICP_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "icp/problem.hpp"

namespace icp {

/// Fixed 64-bit linear congruential stream (Knuth MMIX constants) so that
/// generated corpora reproduce across platforms and implementations.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [-1, 1].
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

 private:
  std::uint64_t state_;
};

inline SparseMatrix gen_tridiag(std::size_t n, double off, double diag) {
  if (n < 1) throw SizeError("gen_tridiag: n >= 1 required");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, diag});
    if (i + 1 < n) {
      t.push_back({i, i + 1, off});
      t.push_back({i + 1, i, off});
    }
  }
  return SparseMatrix::from_triplets(n, t);
}

/// Five-point stencil on an m-by-m grid: 4 on the diagonal, -1 to each grid
/// neighbor; n = m^2.
inline SparseMatrix gen_laplacian2d(std::size_t m) {
  if (m < 1) throw SizeError("gen_laplacian2d: m >= 1 required");
  const std::size_t n = m * m;
  std::vector<Triplet> t;
  auto id = [m](std::size_t r, std::size_t c) { return r * m + c; };
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      t.push_back({id(r, c), id(r, c), 4.0});
      if (r > 0) t.push_back({id(r, c), id(r - 1, c), -1.0});
      if (r + 1 < m) t.push_back({id(r, c), id(r + 1, c), -1.0});
      if (c > 0) t.push_back({id(r, c), id(r, c - 1), -1.0});
      if (c + 1 < m) t.push_back({id(r, c), id(r, c + 1), -1.0});
    }
  return SparseMatrix::from_triplets(n, t);
}

/// Problem with a known exact solution zstar: q is chosen so that
/// (A zstar + q)_i = 1 on the active set and 0 off it. Caller must supply
/// zstar with (zstar - zeta(zstar))_i = 0 on the active set and > 0 off it.
inline IcpProblem gen_known_solution(const SparseMatrix& a,
                                     const DenseVector& zstar,
                                     const std::set<std::size_t>& active,
                                     const ImplicitMap& zeta) {
  const std::size_t n = a.size();
  check_dim(n, zstar.size(), "gen_known_solution");
  check_dim(n, zeta.size(), "gen_known_solution(zeta)");
  const DenseVector zz = zeta.apply(zstar);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = zstar[i] - zz[i];
    if (active.count(i)) {
      if (std::abs(s) > 1e-12)
        throw Error("gen_known_solution: (zstar - zeta(zstar))_i != 0 on "
                    "active index " + std::to_string(i));
    } else if (!(s > 0.0)) {
      throw Error("gen_known_solution: (zstar - zeta(zstar))_i <= 0 off the "
                  "active set at index " + std::to_string(i));
    }
  }
  const DenseVector az = a.matvec(zstar);
  DenseVector q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = (active.count(i) ? 1.0 : 0.0) - az[i];
  return IcpProblem(a, q, zeta);
}

/// Seeded random sdd matrix with positive diagonal (hence H_+): off-diagonal
/// entries in [-1, 1] kept with probability `density`, diagonal set to the
/// absolute off-diagonal row sum plus one.
inline SparseMatrix gen_random_hplus(std::size_t n, std::uint64_t seed,
                                     double density) {
  if (!(density > 0.0 && density <= 1.0))
    throw Error("gen_random_hplus: density must be in (0, 1]");
  Lcg rng(seed);
  std::vector<Triplet> t;
  std::vector<double> rowsum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double u = rng.next_unit();
      const double v = rng.next_symmetric();
      if (u < density && v != 0.0) {
        t.push_back({i, j, v});
        rowsum[i] += std::abs(v);
      }
    }
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + 1.0});
  return SparseMatrix::from_triplets(n, t);
}

}  // namespace icp

#endif  // ICP_GENERATORS_HPP
