#ifndef ICP_SPLITTING_HPP
#define ICP_SPLITTING_HPP

#include <cmath>
#include <string>
#include <variant>

#include "icp/sparse_matrix.hpp"

namespace icp {

namespace scheme {
struct Aor {
  double alpha;
  double beta;
};
struct Sor {
  double alpha;
};
struct GaussSeidel {};
struct Jacobi {};
struct FullM {};  // M = A, N = 0
}  // namespace scheme

using SplittingScheme = std::variant<scheme::Aor, scheme::Sor,
                                     scheme::GaussSeidel, scheme::Jacobi,
                                     scheme::FullM>;

/// AOR parameters behind a scheme; FullM has none.
inline bool aor_parameters(const SplittingScheme& s, double& alpha,
                           double& beta) {
  if (const auto* a = std::get_if<scheme::Aor>(&s)) {
    alpha = a->alpha;
    beta = a->beta;
    return true;
  }
  if (const auto* so = std::get_if<scheme::Sor>(&s)) {
    alpha = beta = so->alpha;
    return true;
  }
  if (std::holds_alternative<scheme::GaussSeidel>(s)) {
    alpha = beta = 1.0;
    return true;
  }
  if (std::holds_alternative<scheme::Jacobi>(s)) {
    alpha = 1.0;
    beta = 0.0;
    return true;
  }
  return false;
}

inline std::string scheme_name(const SplittingScheme& s) {
  if (const auto* a = std::get_if<scheme::Aor>(&s))
    return "aor:" + std::to_string(a->alpha) + "," + std::to_string(a->beta);
  if (const auto* so = std::get_if<scheme::Sor>(&s))
    return "sor:" + std::to_string(so->alpha);
  if (std::holds_alternative<scheme::GaussSeidel>(s)) return "gs";
  if (std::holds_alternative<scheme::Jacobi>(s)) return "jacobi";
  return "fullm";
}

/// Scheme grammar: fullm | jacobi | gs | sor:<alpha> | aor:<alpha>,<beta>
inline SplittingScheme parse_scheme(const std::string& text) {
  if (text == "fullm") return scheme::FullM{};
  if (text == "jacobi") return scheme::Jacobi{};
  if (text == "gs") return scheme::GaussSeidel{};
  auto parse_num = [](const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw Error("bad scheme parameter: " + s);
    return v;
  };
  if (text.rfind("sor:", 0) == 0) {
    const double alpha = parse_num(text.substr(4));
    if (!(alpha > 0.0)) throw Error("sor: alpha must be positive");
    return scheme::Sor{alpha};
  }
  if (text.rfind("aor:", 0) == 0) {
    const std::string rest = text.substr(4);
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw Error("aor scheme needs two parameters: " + text);
    const double alpha = parse_num(rest.substr(0, comma));
    const double beta = parse_num(rest.substr(comma + 1));
    if (!(alpha > 0.0)) throw Error("aor: alpha must be positive");
    return scheme::Aor{alpha, beta};
  }
  throw Error("unknown scheme: " + text +
              " (expected fullm|jacobi|gs|sor:<a>|aor:<a>,<b>)");
}

struct SplitPair {
  SparseMatrix m;
  SparseMatrix n;
};

/// A = M - N for the requested scheme. AOR family:
///   M = (1/alpha)(D - beta L),  N = (1/alpha)[(1-alpha)D + (alpha-beta)L
///   + alpha U]
/// with D, L, U from extract_dlu (L, U hold the negated strict parts).
inline SplitPair build_splitting(const SparseMatrix& a,
                                 const SplittingScheme& s) {
  if (std::holds_alternative<scheme::FullM>(s))
    return {a, SparseMatrix::zero(a.size())};

  double alpha = 0.0, beta = 0.0;
  aor_parameters(s, alpha, beta);
  if (!(alpha > 0.0)) throw Error("build_splitting: alpha must be positive");

  const DluParts dlu = extract_dlu(a);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (dlu.d.values[i] == 0.0)
      throw SingularMatrixError("build_splitting: zero diagonal at row " +
                                std::to_string(i));

  // D and L enter A as D - L, so M = (1/alpha) D - (beta/alpha) (-L_neg)
  // where the extracted L already stores the negated entries.
  std::vector<Triplet> mt, nt;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mt.push_back({i, i, dlu.d.values[i] / alpha});
    nt.push_back({i, i, (1.0 - alpha) * dlu.d.values[i] / alpha});
  }
  for (const Triplet& t : dlu.l.triplets()) {
    // strict lower entry of A is -t.value
    mt.push_back({t.row, t.col, -beta / alpha * t.value});
    nt.push_back({t.row, t.col, (alpha - beta) / alpha * t.value});
  }
  for (const Triplet& t : dlu.u.triplets())
    nt.push_back({t.row, t.col, t.value});

  return {SparseMatrix::from_triplets(a.size(), mt),
          SparseMatrix::from_triplets(a.size(), nt)};
}

/// Omega2 + M*Omega1 + phi*Omega1 (diagonals right-multiply, so phi*Omega1
/// stays diagonal and the triangular structure of M*Omega1 survives).
inline SparseMatrix system_matrix(const SparseMatrix& m,
                                  const DiagonalMatrix& omega1,
                                  const DiagonalMatrix& omega2,
                                  const DiagonalMatrix& phi) {
  check_dim(m.size(), omega1.n, "system_matrix");
  check_dim(m.size(), omega2.n, "system_matrix");
  check_dim(m.size(), phi.n, "system_matrix");
  if (!omega1.all_positive() || !omega2.all_positive())
    throw Error("system_matrix: omega1/omega2 must be positive diagonals");
  std::vector<Triplet> t = scale_columns(m, omega1).triplets();
  for (std::size_t i = 0; i < m.size(); ++i)
    t.push_back({i, i, omega2.values[i] + phi.values[i] * omega1.values[i]});
  return SparseMatrix::from_triplets(m.size(), t);
}

}  // namespace icp

#endif  // ICP_SPLITTING_HPP
