#ifndef ICP_CONVERGENCE_HPP
#define ICP_CONVERGENCE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "icp/dense_matrix.hpp"
#include "icp/solver.hpp"

namespace icp {

/// Strict inequalities carry this absolute margin; boundary instances are
/// reported unsatisfied with a note.
inline constexpr double kStrictMargin = 1e-12;

struct Certificate {
  std::string name;
  double quantity = 0.0;
  double threshold = 0.0;
  bool satisfied = false;
  std::string notes;
};

// ---------------------------------------------------------------------------
// Classifiers (desk-scale where an inverse is required)

inline bool is_sdd(const SparseMatrix& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0, off = 0.0;
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      if (a.col_indices()[k] == i)
        diag = std::abs(a.values()[k]);
      else
        off += std::abs(a.values()[k]);
    }
    if (!(diag > off)) return false;
  }
  return true;
}

inline bool is_z_matrix(const SparseMatrix& a) {
  for (const Triplet& t : a.triplets())
    if (t.row != t.col && t.value > 0.0) return false;
  return true;
}

inline bool is_z_matrix(const DenseMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j && a(i, j) > 0.0) return false;
  return true;
}

/// Literal Def. 2.2: Z-matrix with entrywise nonnegative inverse
/// (entries >= -1e-12 to absorb elimination noise). Singular input is not
/// an M-matrix.
inline bool is_m_matrix(const DenseMatrix& a) {
  if (a.size() > cert_max_n())
    throw SizeError("is_m_matrix: n exceeds certificate bound");
  if (!is_z_matrix(a)) return false;
  try {
    const DenseMatrix inv = DenseLu(a).inverse();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j)
        if (inv(i, j) < -1e-12) return false;
    return true;
  } catch (const SingularMatrixError&) {
    return false;
  }
}

inline bool is_m_matrix(const SparseMatrix& a) {
  return is_m_matrix(DenseMatrix::from_sparse(a));
}

inline bool is_h_matrix(const SparseMatrix& a) {
  return is_m_matrix(comparison_matrix(a));
}

inline bool is_h_plus_matrix(const SparseMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.at(i, i) > 0.0)) return false;
  return is_h_matrix(a);
}

/// All 2^n principal minors positive, each by dense LU determinant.
inline bool is_p_matrix(const SparseMatrix& a) {
  const std::size_t n = a.size();
  if (n > 12) throw SizeError("is_p_matrix: n > 12 (2^n minors)");
  const DenseMatrix d = DenseMatrix::from_sparse(a);
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) idx.push_back(i);
    const std::size_t m = idx.size();
    // determinant of the principal submatrix by Gaussian elimination
    DenseMatrix sub(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) sub(i, j) = d(idx[i], idx[j]);
    double det = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < m; ++i)
        if (std::abs(sub(i, k)) > std::abs(sub(p, k))) p = i;
      if (sub(p, k) == 0.0) {
        det = 0.0;
        break;
      }
      if (p != k) {
        det = -det;
        for (std::size_t j = 0; j < m; ++j) std::swap(sub(p, j), sub(k, j));
      }
      det *= sub(k, k);
      for (std::size_t i = k + 1; i < m; ++i) {
        const double f = sub(i, k) / sub(k, k);
        for (std::size_t j = k; j < m; ++j) sub(i, j) -= f * sub(k, j);
      }
    }
    if (!(det > 1e-12)) return false;
  }
  return true;
}

/// Def. 2.4: <M> - |N| is an M-matrix.
inline bool is_h_splitting(const SparseMatrix& m, const SparseMatrix& n) {
  return is_m_matrix(sparse_add(comparison_matrix(m), abs_matrix(n), 1.0,
                                -1.0));
}

// ---------------------------------------------------------------------------
// Certificate machinery

namespace detail {

struct CertParts {
  std::size_t n = 0;
  DenseMatrix sys;        // Omega2 + M Omega1 + phi Omega1
  DenseMatrix abs_sysinv;  // |sys^{-1}|
  DenseMatrix n_phi;       // N Omega1 + phi Omega1
  DenseMatrix a_om1;       // A Omega1
  DenseMatrix m_phi;       // M Omega1 + phi Omega1
  DenseMatrix om2;         // Omega2 as dense diagonal
  DenseMatrix g2;          // 2 |A| Psi |A^{-1}| Omega2
  bool sys_singular = false;
};

inline DenseMatrix right_scale(const DenseMatrix& a, const DiagonalMatrix& d) {
  DenseMatrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      r(i, j) = a(i, j) * d.values[j];
  return r;
}

inline CertParts cert_parts(const IcpProblem& p, const SolverConfig& cfg,
                            const SplitPair& sp) {
  const std::size_t n = p.size();
  if (n > cert_max_n())
    throw SizeError("certificate: n=" + std::to_string(n) +
                    " exceeds bound " + std::to_string(cert_max_n()));
  CertParts c;
  c.n = n;
  const DenseMatrix a = DenseMatrix::from_sparse(p.a);
  const DenseMatrix m = DenseMatrix::from_sparse(sp.m);
  const DenseMatrix nn = DenseMatrix::from_sparse(sp.n);
  const DenseMatrix phi = DenseMatrix::from_diagonal(cfg.phi);
  c.om2 = DenseMatrix::from_diagonal(cfg.omega2);
  c.a_om1 = right_scale(a, cfg.omega1);
  c.m_phi = right_scale(m + phi, cfg.omega1);
  c.n_phi = right_scale(nn + phi, cfg.omega1);
  c.sys = c.om2 + c.m_phi;  // phi Omega1 already folded into m_phi
  try {
    c.abs_sysinv = DenseLu(c.sys).inverse().abs();
  } catch (const SingularMatrixError&) {
    c.sys_singular = true;
  }
  // 2 |A| Psi |A^{-1}| Omega2
  const DenseMatrix psi = DenseMatrix::from_sparse(p.zeta.psi());
  const DenseMatrix abs_ainv = DenseLu(a).inverse().abs();
  c.g2 = 2.0 * right_scale(a.abs() * psi * abs_ainv, cfg.omega2);
  return c;
}

inline bool strictly_less(double q, double t) {
  return t - q > kStrictMargin;
}

inline std::string boundary_note(double q, double t) {
  return std::abs(t - q) <= kStrictMargin
             ? " (boundary: quantity within strictness margin of threshold)"
             : "";
}

}  // namespace detail

/// Theorem 4.1: rho(T) < 1 with
/// T = |(O2+MO1+phiO1)^{-1}| (|NO1+phiO1| + |O2-AO1| + 2|A|Psi|A^{-1}|O2).
inline Certificate theorem41_rho_T(const IcpProblem& p,
                                   const SolverConfig& cfg,
                                   const SplitPair& sp) {
  Certificate cert{"theorem_4_1_rho_T", 0.0, 1.0, false, ""};
  const detail::CertParts c = detail::cert_parts(p, cfg, sp);
  if (c.sys_singular) {
    cert.notes = "system matrix singular";
    return cert;
  }
  const DenseMatrix t =
      c.abs_sysinv * (c.n_phi.abs() + (c.om2 - c.a_om1).abs() + c.g2);
  const SpectralRadius rho = spectral_radius_nonneg(t);
  cert.quantity = rho.value;
  cert.satisfied = detail::strictly_less(cert.quantity, cert.threshold);
  cert.notes = rho.converged ? "" : "power iteration unconverged";
  cert.notes += detail::boundary_note(cert.quantity, cert.threshold);
  return cert;
}

/// Corollary 4.1: rho(Lbar) < 1 with
/// Lbar = |(O2+MO1+phiO1)^{-1}| (2|NO1+phiO1| + |MO1+phiO1-O2|
///         + 2|A|Psi|A^{-1}|O2).
/// The note records the ordering check rho(T) <= rho(Lbar) + 1e-10.
inline Certificate corollary41_rho_Lbar(const IcpProblem& p,
                                        const SolverConfig& cfg,
                                        const SplitPair& sp) {
  Certificate cert{"corollary_4_1_rho_Lbar", 0.0, 1.0, false, ""};
  const detail::CertParts c = detail::cert_parts(p, cfg, sp);
  if (c.sys_singular) {
    cert.notes = "system matrix singular";
    return cert;
  }
  const DenseMatrix lbar =
      c.abs_sysinv *
      (2.0 * c.n_phi.abs() + (c.m_phi - c.om2).abs() + c.g2);
  const SpectralRadius rho = spectral_radius_nonneg(lbar);
  cert.quantity = rho.value;
  cert.satisfied = detail::strictly_less(cert.quantity, cert.threshold);

  const Certificate t = theorem41_rho_T(p, cfg, sp);
  cert.notes = (t.quantity <= cert.quantity + 1e-10)
                   ? "rho(T) <= rho(Lbar) holds"
                   : "WARNING: rho(T) > rho(Lbar)";
  if (!rho.converged) cert.notes += "; power iteration unconverged";
  cert.notes += detail::boundary_note(cert.quantity, cert.threshold);
  return cert;
}

/// Corollary 4.2: scalar 2-norm bounds
/// S    = ||sys^{-1}||_2 (||NO1+phiO1||_2 + ||AO1-O2||_2
///        + ||2|A|Psi|A^{-1}|O2||_2)
/// Sbar = ||sys^{-1}||_2 (2||NO1+phiO1||_2 + ||MO1+phiO1-O2||_2
///        + ||2|A|Psi|A^{-1}|O2||_2);   satisfied iff min(S, Sbar) < 1.
inline Certificate corollary42_norm_bounds(const IcpProblem& p,
                                           const SolverConfig& cfg,
                                           const SplitPair& sp) {
  Certificate cert{"corollary_4_2_norm_bounds", 0.0, 1.0, false, ""};
  const detail::CertParts c = detail::cert_parts(p, cfg, sp);
  if (c.sys_singular) {
    cert.notes = "system matrix singular";
    return cert;
  }
  const double inv_norm = norm2_matrix(DenseLu(c.sys).inverse());
  const double n_norm = norm2_matrix(c.n_phi);
  const double g_norm = norm2_matrix(c.g2);
  const double s = inv_norm * (n_norm + norm2_matrix(c.a_om1 - c.om2) + g_norm);
  const double sbar =
      inv_norm * (2.0 * n_norm + norm2_matrix(c.m_phi - c.om2) + g_norm);
  cert.quantity = std::min(s, sbar);
  cert.satisfied = detail::strictly_less(cert.quantity, cert.threshold);
  cert.notes = "S=" + std::to_string(s) + " Sbar=" + std::to_string(sbar);
  cert.notes += detail::boundary_note(cert.quantity, cert.threshold);
  return cert;
}

namespace detail {

inline bool omega2_ge_d_omega1(const IcpProblem& p, const SolverConfig& cfg) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (cfg.omega2.values[i] < p.a.at(i, i) * cfg.omega1.values[i])
      return false;
  return true;
}

inline bool omega2_lt_d_omega1(const IcpProblem& p, const SolverConfig& cfg) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.a.at(i, i) * cfg.omega1.values[i];
    if (!(cfg.omega2.values[i] > 0.0 && cfg.omega2.values[i] < d))
      return false;
  }
  return true;
}

}  // namespace detail

/// Theorem 4.2 (H_+ route): satisfied iff
///  (a) A = (M+phi) - (N+phi) is an H-splitting,
///  (b) Omega2 >= D Omega1 on the diagonal,
///  (c) <M O1> - |N O1| - 2|A|Psi|A^{-1}|O2 is an M-matrix.
inline Certificate theorem42_hplus_condition(const IcpProblem& p,
                                             const SolverConfig& cfg,
                                             const SplitPair& sp) {
  Certificate cert{"theorem_4_2_hplus", 0.0, 1.0, false, ""};
  const std::size_t n = p.size();
  if (n > cert_max_n())
    throw SizeError("theorem42_hplus_condition: n exceeds bound");

  const SparseMatrix phi_s = SparseMatrix::from_diagonal(cfg.phi);
  const bool h_split = is_h_splitting(sparse_add(sp.m, phi_s),
                                      sparse_add(sp.n, phi_s));
  const bool diag_ok = detail::omega2_ge_d_omega1(p, cfg);

  const detail::CertParts c = detail::cert_parts(p, cfg, sp);
  const DenseMatrix m_om1 = detail::right_scale(
      DenseMatrix::from_sparse(sp.m), cfg.omega1);
  const DenseMatrix n_om1 = detail::right_scale(
      DenseMatrix::from_sparse(sp.n), cfg.omega1);
  DenseMatrix comp(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      comp(i, j) = (i == j ? std::abs(m_om1(i, j)) : -std::abs(m_om1(i, j))) -
                   std::abs(n_om1(i, j)) - c.g2(i, j);
  const bool m_ok = is_m_matrix(comp);

  cert.satisfied = h_split && diag_ok && m_ok;
  cert.quantity = cert.satisfied ? 1.0 : 0.0;
  cert.threshold = 1.0;
  std::string why;
  if (!h_split) why += "not an H-splitting; ";
  if (!diag_ok) why += "Omega2 < D Omega1 somewhere; ";
  if (!m_ok) why += "<MO1>-|NO1|-2|A|Psi|A^-1|O2 not an M-matrix; ";
  cert.notes = cert.satisfied ? "all three conditions hold" : why;
  return cert;
}

/// Theorem 4.3 / Eq. (7):
///   max{alpha,beta} rho(D_{O1}^{-1}|B_{O1}| + |A|Psi|A^{-1}|O2) < min{1,alpha}
/// with B = L + U and the preconditions rho(...) < 1 and Omega2 >= D Omega1.
inline Certificate theorem43_eq7_window(const SparseMatrix& a,
                                        const DiagonalMatrix& omega1,
                                        const DiagonalMatrix& omega2,
                                        const SparseMatrix& psi, double alpha,
                                        double beta) {
  Certificate cert{"theorem_4_3_aor_window", 0.0, std::min(1.0, alpha), false,
                   ""};
  const std::size_t n = a.size();
  if (n > cert_max_n())
    throw SizeError("theorem43_eq7_window: n exceeds bound");

  const DluParts dlu = extract_dlu(a);
  for (std::size_t i = 0; i < n; ++i)
    if (dlu.d.values[i] == 0.0)
      throw SingularMatrixError("theorem43_eq7_window: zero diagonal");

  // B = L + U (so |B| is the absolute strict off-diagonal part of A)
  const SparseMatrix b = sparse_add(dlu.l, dlu.u);
  const DenseMatrix b_om1 =
      detail::right_scale(DenseMatrix::from_sparse(b), omega1);
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dinv = 1.0 / (dlu.d.values[i] * omega1.values[i]);
    for (std::size_t j = 0; j < n; ++j)
      r(i, j) = std::abs(b_om1(i, j)) * dinv;
  }
  const DenseMatrix abs_ainv = DenseLu(DenseMatrix::from_sparse(a)).inverse()
                                   .abs();
  const DenseMatrix amat = DenseMatrix::from_sparse(a);
  const DenseMatrix psi_d = DenseMatrix::from_sparse(psi);
  const DenseMatrix g = detail::right_scale(amat.abs() * psi_d * abs_ainv,
                                            omega2);
  const SpectralRadius rho = spectral_radius_nonneg(r + g);

  cert.quantity = std::max(alpha, beta) * rho.value;
  const bool pre_rho = detail::strictly_less(rho.value, 1.0);
  bool diag_ok = true;
  for (std::size_t i = 0; i < n; ++i)
    if (omega2.values[i] < a.at(i, i) * omega1.values[i]) diag_ok = false;

  cert.satisfied = pre_rho && diag_ok &&
                   detail::strictly_less(cert.quantity, cert.threshold);
  cert.notes = "rho=" + std::to_string(rho.value);
  if (!pre_rho) cert.notes += "; precondition rho < 1 fails";
  if (!diag_ok) cert.notes += "; hypothesis Omega2 >= D Omega1 not met";
  if (!rho.converged) cert.notes += "; power iteration unconverged";
  cert.notes += detail::boundary_note(cert.quantity, cert.threshold);
  return cert;
}

/// Theorem 4.4: with Abar = <M+phi> - |N+phi| an M-matrix, take the witness
/// V = diag(Abar^{-1} e) (so Abar V has unit row sums) and require strict
/// positivity of the cited vector under regime (1) Omega2 >= D Omega1 or
/// (2) 0 < Omega2 < D Omega1.
inline Certificate theorem44_scaling_check(const SparseMatrix& m,
                                           const SparseMatrix& n,
                                           const DiagonalMatrix& phi,
                                           const DiagonalMatrix& omega1,
                                           const DiagonalMatrix& omega2,
                                           const SparseMatrix& psi) {
  Certificate cert{"theorem_4_4_scaling", 0.0, 1.0, false, ""};
  const std::size_t dim = m.size();
  if (dim > cert_max_n())
    throw SizeError("theorem44_scaling_check: n exceeds bound");

  const SparseMatrix phi_s = SparseMatrix::from_diagonal(phi);
  const SparseMatrix m_phi = sparse_add(m, phi_s);
  const SparseMatrix n_phi = sparse_add(n, phi_s);
  const SparseMatrix abar =
      sparse_add(comparison_matrix(m_phi), abs_matrix(n_phi), 1.0, -1.0);
  if (!is_m_matrix(abar)) {
    cert.notes = "<M+phi>-|N+phi| is not an M-matrix";
    return cert;
  }

  // V = diag(v), v = Abar^{-1} e > 0 for an M-matrix.
  const DenseVector v =
      DenseLu(DenseMatrix::from_sparse(abar)).solve(DenseVector(dim, 1.0));

  const SparseMatrix a = sparse_add(m, n, 1.0, -1.0);
  const DenseMatrix a_d = DenseMatrix::from_sparse(a);
  const DenseMatrix abs_ainv = DenseLu(a_d).inverse().abs();
  const DenseMatrix g = detail::right_scale(
      a_d.abs() * DenseMatrix::from_sparse(psi) * abs_ainv, omega2);

  const DenseMatrix m_phi_o1 =
      detail::right_scale(DenseMatrix::from_sparse(m_phi), omega1);
  const DenseMatrix n_phi_o1 =
      detail::right_scale(DenseMatrix::from_sparse(n_phi), omega1);

  DenseVector dvals(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    dvals[i] = a.at(i, i) * omega1.values[i];

  bool regime1 = true, regime2 = true;
  for (std::size_t i = 0; i < dim; ++i) {
    if (omega2.values[i] < dvals[i]) regime1 = false;
    if (!(omega2.values[i] > 0.0 && omega2.values[i] < dvals[i]))
      regime2 = false;
  }
  if (!regime1 && !regime2) {
    cert.notes = "mixed regime: Omega2 comparable to D Omega1 in neither "
                 "direction";
    return cert;
  }

  // condition vector: (<M_phi O1> - |N_phi O1| - |A|Psi|A^-1|O2 [+ O2 - D O1]) V e
  DenseVector cond(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double comp = (i == j ? std::abs(m_phi_o1(i, j))
                                  : -std::abs(m_phi_o1(i, j)));
      s += (comp - std::abs(n_phi_o1(i, j)) - g(i, j)) * v[j];
    }
    if (!regime1) s += (omega2.values[i] - dvals[i]) * v[i];
    cond[i] = s;
  }

  double min_comp = cond.empty() ? 0.0 : cond[0];
  for (double c : cond) min_comp = std::min(min_comp, c);
  cert.quantity = min_comp;
  cert.threshold = 0.0;
  cert.satisfied = min_comp > kStrictMargin;
  cert.notes = std::string(regime1 ? "regime Omega2 >= D Omega1"
                                   : "regime Omega2 < D Omega1") +
               "; min component " + std::to_string(min_comp);
  if (!cert.satisfied && min_comp > -kStrictMargin)
    cert.notes += " (boundary: component within strictness margin of zero)";
  return cert;
}

}  // namespace icp

#endif  // ICP_CONVERGENCE_HPP
