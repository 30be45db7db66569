#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "icp/splitting.hpp"
#include "support/oracles.hpp"

using namespace icp;
using testsupport::sparse_2x2;

namespace {
const SparseMatrix kA2 = sparse_2x2(4, -1, -1, 4);

bool splits_back(const SparseMatrix& a, const SplitPair& sp) {
  const SparseMatrix diff = sparse_add(sparse_add(sp.m, sp.n, 1.0, -1.0), a,
                                       1.0, -1.0);
  return diff.norm_inf() <= 1e-14 * std::max(a.norm_inf(), 1.0);
}
}  // namespace

TEST_CASE("build_splitting examples") {
  SECTION("Gauss-Seidel") {
    const SplitPair sp = build_splitting(kA2, scheme::GaussSeidel{});
    CHECK(sp.m == sparse_2x2(4, 0, -1, 4));
    CHECK(sp.n == csr_from_triplets(2, {{0, 1, 1.0}}));
  }
  SECTION("AOR(0.5, 0.5)") {
    const SplitPair sp = build_splitting(kA2, scheme::Aor{0.5, 0.5});
    CHECK(sp.m == sparse_2x2(8, 0, -1, 8));
    CHECK(sp.n == sparse_2x2(4, 1, 0, 4));
  }
  SECTION("Jacobi") {
    const SplitPair sp = build_splitting(kA2, scheme::Jacobi{});
    CHECK(sp.m == SparseMatrix::from_diagonal(DiagonalMatrix::scalar(2, 4.0)));
    CHECK(sp.n == sparse_2x2(0, 1, 1, 0));
  }
  SECTION("FullM") {
    const SplitPair sp = build_splitting(kA2, scheme::FullM{});
    CHECK(sp.m == kA2);
    CHECK(sp.n.nnz() == 0);
  }
  SECTION("zero diagonal rejected for the AOR family") {
    const SparseMatrix bad = csr_from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    CHECK_THROWS_AS(build_splitting(bad, scheme::GaussSeidel{}),
                    SingularMatrixError);
    CHECK_NOTHROW(build_splitting(bad, scheme::FullM{}));
  }
}

TEST_CASE("M - N = A across schemes and random matrices") {
  std::mt19937_64 rng(5);
  const std::vector<SplittingScheme> schemes{
      scheme::FullM{}, scheme::Jacobi{}, scheme::GaussSeidel{},
      scheme::Sor{1.3}, scheme::Aor{0.8, 0.4}};
  for (int trial = 0; trial < 20; ++trial) {
    const SparseMatrix a = testsupport::random_sdd(rng, 6);
    for (const SplittingScheme& s : schemes) {
      const SplitPair sp = build_splitting(a, s);
      CHECK(splits_back(a, sp));
    }
  }
}

TEST_CASE("scheme specializations coincide structurally") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const SparseMatrix a = testsupport::random_sdd(rng, 5);
    const SplitPair gs = build_splitting(a, scheme::GaussSeidel{});
    const SplitPair aor11 = build_splitting(a, scheme::Aor{1.0, 1.0});
    const SplitPair sor1 = build_splitting(a, scheme::Sor{1.0});
    CHECK(gs.m == aor11.m);
    CHECK(gs.n == aor11.n);
    CHECK(gs.m == sor1.m);
    CHECK(gs.n == sor1.n);

    const SplitPair j = build_splitting(a, scheme::Jacobi{});
    const SplitPair aor10 = build_splitting(a, scheme::Aor{1.0, 0.0});
    CHECK(j.m == aor10.m);
    CHECK(j.n == aor10.n);

    const SplitPair sor = build_splitting(a, scheme::Sor{1.4});
    const SplitPair aoreq = build_splitting(a, scheme::Aor{1.4, 1.4});
    CHECK(sor.m == aoreq.m);
    CHECK(sor.n == aoreq.n);
  }
}

TEST_CASE("system_matrix") {
  SECTION("diagonal adds") {
    const SparseMatrix m = sparse_2x2(4, 0, -1, 4);
    const SparseMatrix s = system_matrix(m, DiagonalMatrix::identity(2),
                                         DiagonalMatrix::identity(2),
                                         DiagonalMatrix::scalar(2, 0.1));
    CHECK(s.at(0, 0) == Catch::Approx(5.1));
    CHECK(s.at(1, 0) == -1.0);
    CHECK(s.at(1, 1) == Catch::Approx(5.1));
    CHECK(s.at(0, 1) == 0.0);
  }
  SECTION("scalar") {
    const SparseMatrix s = system_matrix(
        csr_from_triplets(1, {{0, 0, 2.0}}), DiagonalMatrix::identity(1),
        DiagonalMatrix::identity(1), DiagonalMatrix::scalar(1, 0.1));
    CHECK(s.at(0, 0) == Catch::Approx(3.1));
  }
  SECTION("diagonal algebra") {
    const SparseMatrix s = system_matrix(
        SparseMatrix::identity(2), DiagonalMatrix(2, {2.0, 3.0}),
        DiagonalMatrix::identity(2), DiagonalMatrix::scalar(2, 0.0));
    CHECK(s.at(0, 0) == 3.0);
    CHECK(s.at(1, 1) == 4.0);
  }
  SECTION("AOR-family system matrix is lower triangular") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      const SparseMatrix a = testsupport::random_sdd(rng, 6);
      for (const SplittingScheme& s :
           std::vector<SplittingScheme>{scheme::GaussSeidel{}, scheme::Jacobi{},
                                        scheme::Sor{1.2}, scheme::Aor{0.9, 0.5}}) {
        const SplitPair sp = build_splitting(a, s);
        CHECK(is_lower_triangular(system_matrix(
            sp.m, DiagonalMatrix::scalar(6, 2.0), DiagonalMatrix::identity(6),
            DiagonalMatrix::scalar(6, 0.1))));
      }
    }
  }
}

TEST_CASE("right-multiplication convention against a dense reference") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const SparseMatrix m = testsupport::random_sparse(rng, 5);
    DenseVector dv(5);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (double& v : dv) v = u(rng);
    const DiagonalMatrix d(5, dv);
    const SparseMatrix scaled = scale_columns(m, d);
    const DenseMatrix ref = testsupport::dense_right_scale_reference(m, d);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        CHECK(scaled.at(i, j) == Catch::Approx(ref(i, j)).margin(1e-15));
  }
}

TEST_CASE("is_lower_triangular") {
  CHECK(is_lower_triangular(sparse_2x2(4, 0, -1, 4)));
  CHECK_FALSE(is_lower_triangular(kA2));
  CHECK(is_lower_triangular(SparseMatrix::identity(2)));
}

TEST_CASE("scheme string grammar") {
  CHECK(std::holds_alternative<scheme::FullM>(parse_scheme("fullm")));
  CHECK(std::holds_alternative<scheme::Jacobi>(parse_scheme("jacobi")));
  CHECK(std::holds_alternative<scheme::GaussSeidel>(parse_scheme("gs")));
  const auto sor = std::get<scheme::Sor>(parse_scheme("sor:1.2"));
  CHECK(sor.alpha == 1.2);
  const auto aor = std::get<scheme::Aor>(parse_scheme("aor:0.9,0.5"));
  CHECK(aor.alpha == 0.9);
  CHECK(aor.beta == 0.5);
  CHECK_THROWS_AS(parse_scheme("sor:-1"), Error);
  CHECK_THROWS_AS(parse_scheme("aor:1.0"), Error);
  CHECK_THROWS_AS(parse_scheme("chaos"), Error);
}
