#ifndef ICP_SOLVER_HPP
#define ICP_SOLVER_HPP

#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "icp/dense_matrix.hpp"
#include "icp/problem.hpp"
#include "icp/splitting.hpp"

namespace icp {

struct SolverConfig {
  double gamma = 1.0;
  DiagonalMatrix omega1;
  DiagonalMatrix omega2;
  DiagonalMatrix phi;
  SplittingScheme scheme = scheme::GaussSeidel{};
  double eps = 1e-8;           // outer stopping tolerance on Res(z)
  std::size_t max_outer = 10000;
  double inner_tol = 1e-10;    // relative inner residual
  std::size_t inner_max = 10000;

  static SolverConfig defaults(std::size_t n) {
    SolverConfig c;
    c.omega1 = DiagonalMatrix::identity(n);
    c.omega2 = DiagonalMatrix::identity(n);
    c.phi = DiagonalMatrix::scalar(n, 0.0);
    c.inner_tol = c.eps / 100.0;
    return c;
  }

  void validate(std::size_t n) const {
    if (!(gamma > 0.0)) throw Error("SolverConfig: gamma must be positive");
    if (!(eps > 0.0)) throw Error("SolverConfig: eps must be positive");
    if (max_outer == 0) throw Error("SolverConfig: max_outer must be >= 1");
    check_dim(omega1.n, n, "SolverConfig(omega1)");
    check_dim(omega2.n, n, "SolverConfig(omega2)");
    check_dim(phi.n, n, "SolverConfig(phi)");
    if (!omega1.all_positive() || !omega2.all_positive())
      throw Error("SolverConfig: omega1/omega2 must be positive diagonals");
    for (double v : phi.values)
      if (!std::isfinite(v)) throw Error("SolverConfig: phi must be finite");
  }
};

enum class SolveStatus { converged, max_iters, inner_failure };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    default: return "inner_failure";
  }
}

struct SolveReport {
  SolveStatus status = SolveStatus::max_iters;
  std::size_t iterations = 0;
  DenseVector residuals;  // one entry per outer step
  DenseVector z;
  DenseVector x;
  double elapsed_seconds = 0.0;
};

struct InnerResult {
  DenseVector x;
  bool converged = false;
  double achieved_residual = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline bool is_symmetric(const SparseMatrix& a, double rel_tol = 1e-14) {
  const double scale = std::max(a.norm_inf(), 1.0);
  for (const Triplet& t : a.triplets())
    if (std::abs(t.value - a.at(t.col, t.row)) > rel_tol * scale) return false;
  return true;
}

inline double rel_residual(const SparseMatrix& a, const DenseVector& x,
                           const DenseVector& b) {
  DenseVector r = a.matvec(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return norm2(r) / (1.0 + norm2(b));
}

inline InnerResult conjugate_gradient(const SparseMatrix& a,
                                      const DenseVector& b, double tol,
                                      std::size_t max_iter) {
  const std::size_t n = a.size();
  InnerResult out;
  out.x.assign(n, 0.0);
  DenseVector r = b, p = b;
  double rr = 0.0;
  for (double v : r) rr += v * v;
  const double stop = tol * (1.0 + norm2(b));
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= stop) {
      out.converged = true;
      break;
    }
    DenseVector ap = a.matvec(p);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (pap <= 0.0) break;  // not SPD after all
    const double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    double rr_next = 0.0;
    for (double v : r) rr_next += v * v;
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_next;
    ++out.iterations;
  }
  out.converged = out.converged || std::sqrt(rr) <= stop;
  out.achieved_residual = rel_residual(a, out.x, b);
  return out;
}

inline InnerResult bicgstab(const SparseMatrix& a, const DenseVector& b,
                            double tol, std::size_t max_iter) {
  const std::size_t n = a.size();
  InnerResult out;
  out.x.assign(n, 0.0);
  DenseVector r = b;
  DenseVector rhat = r, p(n, 0.0), v(n, 0.0);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double stop = tol * (1.0 + norm2(b));
  auto dot = [n](const DenseVector& x, const DenseVector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  };
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (norm2(r) <= stop) {
      out.converged = true;
      break;
    }
    const double rho_next = dot(rhat, r);
    if (rho_next == 0.0) break;  // breakdown
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = r[i] + beta * (p[i] - omega * v[i]);
    v = a.matvec(p);
    const double rhv = dot(rhat, v);
    if (rhv == 0.0) break;
    alpha = rho / rhv;
    DenseVector s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) <= stop) {
      for (std::size_t i = 0; i < n; ++i) out.x[i] += alpha * p[i];
      out.converged = true;
      break;
    }
    DenseVector t = a.matvec(s);
    const double tt = dot(t, t);
    if (tt == 0.0) break;
    omega = dot(t, s) / tt;
    if (omega == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i] + omega * s[i];
      r[i] = s[i] - omega * t[i];
    }
    ++out.iterations;
  }
  out.converged = out.converged || norm2(r) <= stop;
  out.achieved_residual = rel_residual(a, out.x, b);
  return out;
}

}  // namespace detail

/// Linear solve with ||Az - b||_2 <= tol * (1 + ||b||_2). Direct dense LU
/// at desk scale, CG for detected-symmetric matrices above it, BiCGSTAB
/// otherwise.
inline InnerResult inner_solve(const SparseMatrix& a, const DenseVector& b,
                               double tol, std::size_t max_iter) {
  check_dim(a.size(), b.size(), "inner_solve");
  if (a.size() <= cert_max_n()) {
    InnerResult out;
    out.x = DenseLu(DenseMatrix::from_sparse(a)).solve(b);
    out.achieved_residual = detail::rel_residual(a, out.x, b);
    out.converged = true;
    return out;
  }
  if (detail::is_symmetric(a)) {
    InnerResult r = detail::conjugate_gradient(a, b, tol, max_iter);
    if (r.converged) return r;
    // symmetry scan cannot see indefiniteness; fall through to BiCGSTAB
  }
  return detail::bicgstab(a, b, tol, max_iter);
}

/// Step 1 right-hand side: (1/gamma) Omega2 (|x| - x) - q.
inline DenseVector modulus_rhs_z(const IcpProblem& p, const SolverConfig& cfg,
                                 const DenseVector& x) {
  check_dim(p.size(), x.size(), "modulus_rhs_z");
  DenseVector b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    b[i] = cfg.omega2.values[i] * (std::abs(x[i]) - x[i]) / cfg.gamma - p.q[i];
  return b;
}

/// Step 3 right-hand side:
///   (N Omega1 + phi Omega1) x + (Omega2 - A Omega1) |x|
///   - gamma A zeta(z) - gamma q.
inline DenseVector x_update_rhs(const IcpProblem& p, const SolverConfig& cfg,
                                const SplitPair& sp, const DenseVector& x,
                                const DenseVector& z) {
  const std::size_t n = p.size();
  check_dim(n, x.size(), "x_update_rhs");
  check_dim(n, z.size(), "x_update_rhs(z)");
  const DenseVector ax = vec_abs(x);
  // right-diagonal scaling folds into the vector: (M Omega1) v = M (Omega1 v)
  const DenseVector nx = sp.n.matvec(cfg.omega1.apply(x));
  const DenseVector aax = p.a.matvec(cfg.omega1.apply(ax));
  const DenseVector az = p.a.matvec(p.zeta.apply(z));
  DenseVector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = nx[i] + cfg.phi.values[i] * cfg.omega1.values[i] * x[i] +
             cfg.omega2.values[i] * ax[i] - aax[i] - cfg.gamma * az[i] -
             cfg.gamma * p.q[i];
  }
  return rhs;
}

/// Solve (Omega2 + M Omega1 + phi Omega1) x = rhs; forward substitution when
/// the system matrix is lower triangular (the whole AOR family), otherwise
/// the inner linear solver.
inline DenseVector x_update_solve(const SparseMatrix& sysmat,
                                  const DenseVector& rhs,
                                  const SolverConfig& cfg) {
  if (is_lower_triangular(sysmat)) return lower_triangular_solve(sysmat, rhs);
  InnerResult r = inner_solve(sysmat, rhs, cfg.inner_tol, cfg.inner_max);
  if (!r.converged)
    throw SingularMatrixError("x_update_solve: inner solve failed (residual " +
                              std::to_string(r.achieved_residual) + ")");
  return r.x;
}

/// Outer iteration:
///   Step 1  A z = (1/gamma) Omega2 (|x| - x) - q
///   Step 2  stop when Res(z) < eps
///   Step 3  (Omega2 + M Omega1 + phi Omega1) x' = x_update_rhs(x, z)
inline SolveReport solve_icp(const IcpProblem& p, const SolverConfig& cfg,
                             const DenseVector& x0 = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = p.size();
  cfg.validate(n);

  DenseVector x = x0.empty() ? DenseVector(n, 0.0) : x0;
  check_dim(n, x.size(), "solve_icp(x0)");

  const SplitPair sp = build_splitting(p.a, cfg.scheme);
  const SparseMatrix sysmat = system_matrix(sp.m, cfg.omega1, cfg.omega2,
                                            cfg.phi);
  const bool sys_lower = is_lower_triangular(sysmat);

  // A is solved once per outer step; factor it up front at desk scale.
  std::optional<DenseLu> a_lu;
  if (n <= cert_max_n()) a_lu.emplace(DenseMatrix::from_sparse(p.a));

  SolveReport rep;
  rep.x = x;
  for (std::size_t k = 0; k < cfg.max_outer; ++k) {
    const DenseVector b = modulus_rhs_z(p, cfg, x);
    DenseVector z;
    if (a_lu) {
      z = a_lu->solve(b);
    } else {
      InnerResult ir = inner_solve(p.a, b, cfg.inner_tol, cfg.inner_max);
      if (!ir.converged) {
        rep.status = SolveStatus::inner_failure;
        rep.z = std::move(ir.x);
        rep.x = x;
        rep.iterations = k;
        if (rep.residuals.empty()) rep.residuals.push_back(residual(p, rep.z));
        break;
      }
      z = std::move(ir.x);
    }

    const double res = residual(p, z);
    rep.residuals.push_back(res);
    rep.iterations = k;
    rep.z = z;
    rep.x = x;
    if (res < cfg.eps) {
      rep.status = SolveStatus::converged;
      // report x in the modulus coordinates of the final z, i.e.
      // x = (gamma/2)(Omega1^{-1} s(z) - Omega2^{-1} w(z)); the Eq. (2)
      // fixed-point residual of this x is gamma (Omega2 - A Omega1) applied
      // to the componentwise min driving Res(z), so it inherits the
      // stopping tolerance.
      const DenseVector w = p.w(z);
      const DenseVector s = p.s(z);
      for (std::size_t i = 0; i < n; ++i)
        rep.x[i] = 0.5 * cfg.gamma *
                   (s[i] / cfg.omega1.values[i] - w[i] / cfg.omega2.values[i]);
      break;
    }

    const DenseVector rhs = x_update_rhs(p, cfg, sp, x, z);
    x = sys_lower ? lower_triangular_solve(sysmat, rhs)
                  : x_update_solve(sysmat, rhs, cfg);
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace icp

#endif  // ICP_SOLVER_HPP
