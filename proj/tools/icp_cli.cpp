// Batch front end: solve problem bundles, run convergence certificates,
// generate test corpora, and benchmark scheme variants.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icp/icp.hpp"

namespace {

using icp::DenseVector;
using icp::DiagonalMatrix;
using icp::Json;
using icp::SparseMatrix;

// Scalar string -> scalar * I; anything else is a Matrix Market file path
// holding a diagonal matrix.
DiagonalMatrix parse_diagonal(const std::string& arg, std::size_t n,
                              const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(arg, &pos);
    if (pos == arg.size()) return DiagonalMatrix::scalar(n, v);
  } catch (const std::exception&) {
    // fall through to file path
  }
  const SparseMatrix m = icp::read_matrix_market_sparse_file(arg);
  icp::check_dim(m.size(), n, what);
  DenseVector d(n, 0.0);
  for (const icp::Triplet& t : m.triplets()) {
    if (t.row != t.col)
      throw icp::Error(std::string(what) + ": file " + arg +
                       " has off-diagonal entries");
    d[t.row] = t.value;
  }
  return DiagonalMatrix(n, d);
}

struct SolveOptions {
  std::string scheme = "gs";
  double gamma = 1.0;
  double eps = 1e-8;
  std::size_t max_outer = 10000;
  std::string omega1 = "1";
  std::string omega2 = "1";
  std::string phi = "0.1";
};

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--scheme", o.scheme,
                  "fullm|jacobi|gs|sor:<alpha>|aor:<alpha>,<beta>");
  cmd->add_option("--gamma", o.gamma, "positive modulus scaling constant");
  cmd->add_option("--eps", o.eps, "outer stopping tolerance on Res(z)");
  cmd->add_option("--max-outer", o.max_outer, "outer iteration cap");
  cmd->add_option("--omega1", o.omega1, "scalar or diagonal .mtx path");
  cmd->add_option("--omega2", o.omega2, "scalar or diagonal .mtx path");
  cmd->add_option("--phi", o.phi,
                  "relaxation diagonal: scalar or diagonal .mtx path");
}

icp::SolverConfig make_config(const SolveOptions& o, std::size_t n) {
  icp::SolverConfig cfg = icp::SolverConfig::defaults(n);
  cfg.scheme = icp::parse_scheme(o.scheme);
  cfg.gamma = o.gamma;
  cfg.eps = o.eps;
  cfg.max_outer = o.max_outer;
  cfg.inner_tol = o.eps / 100.0;
  cfg.omega1 = parse_diagonal(o.omega1, n, "--omega1");
  cfg.omega2 = parse_diagonal(o.omega2, n, "--omega2");
  cfg.phi = parse_diagonal(o.phi, n, "--phi");
  return cfg;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw icp::Error("cannot open for writing: " + path);
  f << text;
}

int cmd_solve(const std::string& bundle, const SolveOptions& opts,
              const std::string& out) {
  const icp::IcpProblem p = icp::read_bundle(bundle);
  const icp::SolverConfig cfg = make_config(opts, p.size());
  const icp::SolveReport rep = icp::solve_icp(p, cfg);
  write_text_file(out, icp::report_to_json(rep).dump(2) + "\n");
  std::cout << "status=" << icp::to_string(rep.status)
            << " iterations=" << rep.iterations
            << " residual=" << (rep.residuals.empty() ? 0.0
                                                      : rep.residuals.back())
            << " report=" << out << "\n";
  switch (rep.status) {
    case icp::SolveStatus::converged: return 0;
    case icp::SolveStatus::max_iters: return 2;
    default: return 3;
  }
}

std::string classifier_summary(const SparseMatrix& a) {
  std::ostringstream os;
  os << "n=" << a.size() << " nnz=" << a.nnz();
  os << " sdd=" << (icp::is_sdd(a) ? "yes" : "no");
  os << " z_matrix=" << (icp::is_z_matrix(a) ? "yes" : "no");
  if (a.size() <= icp::cert_max_n()) {
    os << " m_matrix=" << (icp::is_m_matrix(a) ? "yes" : "no");
    os << " h_plus=" << (icp::is_h_plus_matrix(a) ? "yes" : "no");
  }
  if (a.size() <= 12)
    os << " p_matrix=" << (icp::is_p_matrix(a) ? "yes" : "no");
  return os.str();
}

int cmd_check(const std::string& bundle, const SolveOptions& opts,
              bool run_oracle, const std::string& out) {
  const icp::IcpProblem p = icp::read_bundle(bundle);
  if (p.size() > icp::cert_max_n()) {
    std::cerr << "error: n=" << p.size() << " exceeds certificate bound "
              << icp::cert_max_n() << "\n";
    return 1;
  }
  const icp::SolverConfig cfg = make_config(opts, p.size());
  const icp::SplitPair sp = icp::build_splitting(p.a, cfg.scheme);

  std::vector<icp::Certificate> certs;
  certs.push_back(icp::theorem41_rho_T(p, cfg, sp));
  certs.push_back(icp::corollary41_rho_Lbar(p, cfg, sp));
  certs.push_back(icp::corollary42_norm_bounds(p, cfg, sp));
  certs.push_back(icp::theorem42_hplus_condition(p, cfg, sp));
  double alpha = 0.0, beta = 0.0;
  if (icp::aor_parameters(cfg.scheme, alpha, beta))
    certs.push_back(icp::theorem43_eq7_window(p.a, cfg.omega1, cfg.omega2,
                                              p.zeta.psi(), alpha, beta));
  certs.push_back(icp::theorem44_scaling_check(sp.m, sp.n, cfg.phi,
                                               cfg.omega1, cfg.omega2,
                                               p.zeta.psi()));

  bool negative_phi = false;
  for (double v : cfg.phi.values) negative_phi |= v < 0.0;

  Json j;
  j["matrix"] = classifier_summary(p.a);
  if (negative_phi)
    j["warning"] = "negative relaxation entries: theorem bounds use "
                   "|phi Omega1| while the iteration uses phi Omega1";
  Json arr = Json::array();
  for (const icp::Certificate& c : certs)
    arr.push_back(icp::certificate_to_json(c));
  j["certificates"] = arr;

  std::cout << j["matrix"].get<std::string>() << "\n";
  for (const icp::Certificate& c : certs)
    std::cout << c.name << ": quantity=" << c.quantity
              << " threshold=" << c.threshold
              << " satisfied=" << (c.satisfied ? "yes" : "no")
              << (c.notes.empty() ? "" : " [" + c.notes + "]") << "\n";

  if (run_oracle) {
    if (p.size() > 12) {
      std::cerr << "error: --oracle requires n <= 12\n";
      return 1;
    }
    const std::vector<DenseVector> sols = icp::enumerate_icp(p);
    Json os = Json::array();
    for (const DenseVector& z : sols) os.push_back(z);
    j["oracle_solutions"] = os;
    std::cout << "oracle: " << sols.size() << " solution(s)\n";
    for (const DenseVector& z : sols) {
      std::cout << "  [";
      for (std::size_t i = 0; i < z.size(); ++i)
        std::cout << (i ? ", " : "") << z[i];
      std::cout << "]\n";
    }
  }

  write_text_file(out, j.dump(2) + "\n");
  return 0;
}

int cmd_gen(const std::string& family, std::size_t n, std::size_t m,
            double diag, double off, std::uint64_t seed, double density,
            double c_scale, const std::string& out) {
  SparseMatrix a;
  if (family == "tridiag") {
    a = icp::gen_tridiag(n, off, diag);
  } else if (family == "lap2d") {
    a = icp::gen_laplacian2d(m);
  } else if (family == "random-hplus" || family == "known-solution") {
    a = icp::gen_random_hplus(n, seed, density);
  } else {
    std::cerr << "error: unknown family '" << family
              << "' (tridiag|lap2d|random-hplus|known-solution)\n";
    return 1;
  }

  const std::size_t dim = a.size();
  icp::ImplicitMap zeta =
      c_scale == 0.0
          ? icp::ImplicitMap::zero(dim)
          : icp::ImplicitMap(
                icp::sparse_add(SparseMatrix::identity(dim),
                                SparseMatrix::zero(dim), c_scale, 1.0),
                DenseVector(dim, 0.0));

  icp::IcpProblem p(a, DenseVector(dim, 0.0), zeta);
  if (family == "known-solution") {
    // zstar: seeded positive values with roughly half the components zero
    // (the active set); zstar - zeta(zstar) = (1 - c) zstar keeps signs.
    icp::Lcg rng(seed ^ 0x9e3779b97f4a7c15ULL);
    DenseVector zstar(dim, 0.0);
    std::set<std::size_t> active;
    for (std::size_t i = 0; i < dim; ++i) {
      if (rng.next_unit() < 0.5)
        zstar[i] = 0.5 + rng.next_unit();
      else
        active.insert(i);
    }
    p = icp::gen_known_solution(a, zstar, active, zeta);
    icp::write_bundle(out, p);
    icp::write_matrix_market_file((icp::fs::path(out) / "zstar.mtx").string(),
                                  zstar);
  } else {
    // q makes z = e an interior reference point; any q works for gen
    DenseVector q = a.matvec(DenseVector(dim, 1.0));
    for (double& v : q) v = -v;
    p = icp::IcpProblem(a, q, zeta);
    icp::write_bundle(out, p);
  }
  std::cout << classifier_summary(a) << "\n";
  std::cout << "bundle written to " << out << "\n";
  return 0;
}

struct GridPoint {
  std::string phi;
};

int cmd_bench(const std::string& corpus, const std::string& schemes_arg,
              const std::string& grid_arg, const SolveOptions& base,
              const std::string& out) {
  std::vector<std::string> bundles;
  if (icp::fs::exists(icp::fs::path(corpus) / "A.mtx")) {
    bundles.push_back(corpus);  // single-bundle corpus
  } else if (icp::fs::is_directory(corpus)) {
    for (const auto& e : icp::fs::directory_iterator(corpus))
      if (e.is_directory() && icp::fs::exists(e.path() / "A.mtx"))
        bundles.push_back(e.path().string());
  }
  std::sort(bundles.begin(), bundles.end());
  if (bundles.empty()) {
    std::cerr << "error: no problem bundles under " << corpus << "\n";
    return 1;
  }

  std::vector<std::string> schemes;
  {
    std::stringstream ss(schemes_arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) schemes.push_back(tok);
  }
  if (schemes.empty()) {
    std::cerr << "error: no schemes given\n";
    return 1;
  }

  std::vector<std::string> phi_grid{base.phi};
  if (!grid_arg.empty()) {
    if (grid_arg.rfind("phi=", 0) != 0) {
      std::cerr << "error: --grid supports phi=<v1>,<v2>,...\n";
      return 1;
    }
    phi_grid.clear();
    std::stringstream ss(grid_arg.substr(4));
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) phi_grid.push_back(tok);
  }

  std::ostringstream table;
  table << "problem\tscheme\tphi\tstatus\titerations\tfinal_residual\t"
           "elapsed_seconds\n";
  for (const std::string& b : bundles) {
    const icp::IcpProblem p = icp::read_bundle(b);
    for (const std::string& s : schemes)
      for (const std::string& phi : phi_grid) {
        SolveOptions o = base;
        o.scheme = s;
        o.phi = phi;
        const icp::SolveReport rep = icp::solve_icp(p, make_config(o, p.size()));
        table << icp::fs::path(b).filename().string() << "\t" << s << "\t"
              << phi << "\t" << icp::to_string(rep.status) << "\t"
              << rep.iterations << "\t"
              << icp::detail::fmt17(rep.residuals.empty()
                                        ? 0.0
                                        : rep.residuals.back())
              << "\t" << rep.elapsed_seconds << "\n";
      }
  }
  write_text_file(out, table.str());
  std::cout << table.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxation modulus-based matrix splitting solver for "
               "implicit complementarity problems"};
  app.require_subcommand(1);

  SolveOptions solve_opts, check_opts, bench_opts;
  std::string bundle, out_report = "report.json";
  CLI::App* solve = app.add_subcommand("solve", "solve a problem bundle");
  solve->add_option("bundle", bundle, "bundle directory")->required();
  add_solve_options(solve, solve_opts);
  solve->add_option("--out", out_report, "report output path");

  std::string check_bundle, out_cert = "certificates.json";
  bool with_oracle = false;
  CLI::App* check = app.add_subcommand(
      "check", "run convergence certificates on a bundle");
  check->add_option("bundle", check_bundle, "bundle directory")->required();
  add_solve_options(check, check_opts);
  check->add_flag("--oracle", with_oracle,
                  "also enumerate all solutions (n <= 12)");
  check->add_option("--out", out_cert, "certificate output path");

  std::string family, gen_out = "bundle";
  std::size_t gen_n = 10, gen_m = 3;
  double gen_diag = 4.0, gen_off = -1.0, gen_density = 0.5, gen_c = 0.0;
  std::uint64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("gen", "generate a problem bundle");
  gen->add_option("family", family,
                  "tridiag|lap2d|random-hplus|known-solution")
      ->required();
  gen->add_option("--n", gen_n, "dimension (tridiag/random families)");
  gen->add_option("--m", gen_m, "grid side (lap2d; n = m^2)");
  gen->add_option("--diag", gen_diag, "tridiag diagonal value");
  gen->add_option("--off", gen_off, "tridiag off-diagonal value");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--density", gen_density, "off-diagonal fill in (0,1]");
  gen->add_option("--c", gen_c, "implicit map zeta(z) = c z");
  gen->add_option("--out", gen_out, "bundle output directory");

  std::string corpus, schemes = "gs", grid, out_table = "bench.tsv";
  CLI::App* bench = app.add_subcommand(
      "bench", "run (problem, scheme, grid) cells over a corpus");
  bench->add_option("corpus", corpus, "directory of bundles (or one bundle)")
      ->required();
  bench->add_option("--schemes", schemes, "comma-separated scheme list");
  bench->add_option("--grid", grid, "parameter grid, e.g. phi=0,0.1,0.2");
  add_solve_options(bench, bench_opts);
  bench->add_option("--out", out_table, "table output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(bundle, solve_opts, out_report);
    if (check->parsed())
      return cmd_check(check_bundle, check_opts, with_oracle, out_cert);
    if (gen->parsed())
      return cmd_gen(family, gen_n, gen_m, gen_diag, gen_off, gen_seed,
                     gen_density, gen_c, gen_out);
    if (bench->parsed())
      return cmd_bench(corpus, schemes, grid, bench_opts, out_table);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
