#ifndef ICP_IO_HPP
#define ICP_IO_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "icp/convergence.hpp"
#include "icp/matrix_market.hpp"
#include "icp/problem.hpp"
#include "icp/solver.hpp"

namespace icp {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Problem bundle: a directory with A.mtx and q.mtx, plus optional C.mtx,
/// d.mtx, psi.mtx. Missing implicit-map files mean zeta = 0 (plain LCP);
/// a present C with no psi gets psi = |C|.
inline IcpProblem read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw Error("bundle: not a directory: " + dir.string());
  const SparseMatrix a = read_matrix_market_sparse_file((dir / "A.mtx").string());
  const DenseVector q = read_matrix_market_vector_file((dir / "q.mtx").string());
  const std::size_t n = a.size();
  check_dim(n, q.size(), "bundle");

  const bool has_c = fs::exists(dir / "C.mtx");
  const bool has_d = fs::exists(dir / "d.mtx");
  const bool has_psi = fs::exists(dir / "psi.mtx");
  if (!has_c && !has_d && !has_psi)
    return IcpProblem(a, q);

  SparseMatrix c = has_c ? read_matrix_market_sparse_file((dir / "C.mtx").string())
                         : SparseMatrix::zero(n);
  DenseVector d = has_d ? read_matrix_market_vector_file((dir / "d.mtx").string())
                        : DenseVector(n, 0.0);
  SparseMatrix psi = has_psi
                         ? read_matrix_market_sparse_file((dir / "psi.mtx").string())
                         : abs_matrix(c);
  return IcpProblem(a, q, ImplicitMap(c, d, psi));
}

inline void write_bundle(const fs::path& dir, const IcpProblem& p) {
  fs::create_directories(dir);
  write_matrix_market_file((dir / "A.mtx").string(), p.a);
  write_matrix_market_file((dir / "q.mtx").string(), p.q);
  if (!p.zeta.is_zero()) {
    write_matrix_market_file((dir / "C.mtx").string(), p.zeta.c());
    write_matrix_market_file((dir / "d.mtx").string(), p.zeta.d());
    write_matrix_market_file((dir / "psi.mtx").string(), p.zeta.psi());
  }
}

inline Json report_to_json(const SolveReport& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["residuals"] = r.residuals;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["z"] = r.z;
  j["x"] = r.x;
  return j;
}

inline SolveReport report_from_json(const Json& j) {
  SolveReport r;
  const std::string s = j.at("status").get<std::string>();
  r.status = s == "converged"
                 ? SolveStatus::converged
                 : (s == "max_iters" ? SolveStatus::max_iters
                                     : SolveStatus::inner_failure);
  r.iterations = j.at("iterations").get<std::size_t>();
  r.residuals = j.at("residuals").get<DenseVector>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  r.z = j.at("z").get<DenseVector>();
  r.x = j.at("x").get<DenseVector>();
  return r;
}

inline Json certificate_to_json(const Certificate& c) {
  Json j;
  j["name"] = c.name;
  j["quantity"] = c.quantity;
  j["threshold"] = c.threshold;
  j["satisfied"] = c.satisfied;
  j["notes"] = c.notes;
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.name = j.at("name").get<std::string>();
  c.quantity = j.at("quantity").get<double>();
  c.threshold = j.at("threshold").get<double>();
  c.satisfied = j.at("satisfied").get<bool>();
  c.notes = j.at("notes").get<std::string>();
  return c;
}

}  // namespace icp

#endif  // ICP_IO_HPP
