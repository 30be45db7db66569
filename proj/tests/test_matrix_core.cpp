#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "icp/dense_matrix.hpp"
#include "icp/sparse_matrix.hpp"
#include "support/oracles.hpp"

using namespace icp;
using testsupport::sparse_2x2;

namespace {
const SparseMatrix kA2 = sparse_2x2(4, -1, -1, 4);
}

TEST_CASE("csr_from_triplets canonical construction") {
  SECTION("single entry") {
    const SparseMatrix m = csr_from_triplets(1, {{0, 0, 2.0}});
    CHECK(m.at(0, 0) == 2.0);
    CHECK(m.nnz() == 1);
  }
  SECTION("2x2 direct") {
    CHECK(kA2.at(0, 0) == 4.0);
    CHECK(kA2.at(0, 1) == -1.0);
    CHECK(kA2.at(1, 0) == -1.0);
    CHECK(kA2.at(1, 1) == 4.0);
  }
  SECTION("duplicates summed, zero dropped") {
    const SparseMatrix m = csr_from_triplets(2, {{0, 0, 1.0}, {0, 0, -1.0}});
    CHECK(m.nnz() == 0);
  }
  SECTION("duplicates accumulate") {
    const SparseMatrix m = csr_from_triplets(2, {{1, 0, 1.0}, {1, 0, 2.5}});
    CHECK(m.at(1, 0) == 3.5);
  }
  SECTION("index out of range") {
    CHECK_THROWS_AS(csr_from_triplets(2, {{2, 0, 1.0}}), SizeError);
  }
  SECTION("invariants hold") {
    const SparseMatrix m =
        csr_from_triplets(3, {{2, 1, 1.0}, {0, 2, 3.0}, {2, 0, -1.0}});
    const auto& off = m.row_offsets();
    REQUIRE(off.size() == 4);
    CHECK(off[0] == 0);
    CHECK(off[3] == m.nnz());
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(off[i] <= off[i + 1]);
      for (std::size_t k = off[i] + 1; k < off[i + 1]; ++k)
        CHECK(m.col_indices()[k - 1] < m.col_indices()[k]);
    }
  }
}

TEST_CASE("matvec") {
  CHECK(matvec(kA2, {1.0, 1.0}) == DenseVector{3.0, 3.0});
  CHECK(matvec(SparseMatrix::identity(3), {1.0, -2.0, 5.0}) ==
        DenseVector{1.0, -2.0, 5.0});
  CHECK(matvec(kA2, {0.0, 0.0}) == DenseVector{0.0, 0.0});
  CHECK_THROWS_AS(matvec(kA2, {1.0}), DimensionError);
}

TEST_CASE("extract_dlu sign convention") {
  SECTION("A2") {
    const DluParts p = extract_dlu(kA2);
    CHECK(p.d.values == DenseVector{4.0, 4.0});
    CHECK(p.l.at(1, 0) == 1.0);  // negated
    CHECK(p.l.nnz() == 1);
    CHECK(p.u.at(0, 1) == 1.0);
    CHECK(p.u.nnz() == 1);
  }
  SECTION("identity") {
    const DluParts p = extract_dlu(SparseMatrix::identity(2));
    CHECK(p.d.values == DenseVector{1.0, 1.0});
    CHECK(p.l.nnz() == 0);
    CHECK(p.u.nnz() == 0);
  }
  SECTION("upper only") {
    const SparseMatrix m = csr_from_triplets(2, {{0, 0, 2}, {0, 1, 3}, {1, 1, 2}});
    const DluParts p = extract_dlu(m);
    CHECK(p.d.values == DenseVector{2.0, 2.0});
    CHECK(p.l.nnz() == 0);
    CHECK(p.u.at(0, 1) == -3.0);
  }
  SECTION("reconstruction D - L - U = A on random matrices") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
      const SparseMatrix a = testsupport::random_sparse(rng, 6);
      const DluParts p = extract_dlu(a);
      SparseMatrix rebuilt = sparse_add(
          sparse_add(SparseMatrix::from_diagonal(p.d), p.l, 1.0, -1.0), p.u,
          1.0, -1.0);
      REQUIRE(rebuilt == a);
    }
  }
}

TEST_CASE("comparison and absolute-value matrices") {
  CHECK(comparison_matrix(kA2) == kA2);
  CHECK(comparison_matrix(sparse_2x2(2, 1, -3, 5)) == sparse_2x2(2, -1, -3, 5));
  CHECK(comparison_matrix(SparseMatrix::identity(2)) ==
        SparseMatrix::identity(2));

  CHECK(abs_matrix(csr_from_triplets(2, {{0, 1, -1}, {1, 0, 2}})) ==
        csr_from_triplets(2, {{0, 1, 1}, {1, 0, 2}}));
  CHECK(abs_matrix(kA2) == sparse_2x2(4, 1, 1, 4));
  CHECK(abs_matrix(SparseMatrix::zero(2)).nnz() == 0);

  SECTION("properties on random matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
      const SparseMatrix a = testsupport::random_sparse(rng, 5);
      const SparseMatrix comp = comparison_matrix(a);
      const SparseMatrix ab = abs_matrix(a);
      CHECK(comparison_matrix(comp) == comp);  // idempotent on its image
      CHECK(ab.nonnegative());
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
          CHECK(comp.at(i, j) <= ab.at(i, j));
          if (i == j) CHECK(comp.at(i, j) == ab.at(i, j));
        }
    }
  }
}

TEST_CASE("lower_triangular_solve") {
  CHECK(lower_triangular_solve(sparse_2x2(2, 0, -1, 3), {2.0, 2.0}) ==
        DenseVector{1.0, 1.0});
  CHECK(lower_triangular_solve(SparseMatrix::identity(2), {3.0, -4.0}) ==
        DenseVector{3.0, -4.0});
  CHECK(lower_triangular_solve(
            SparseMatrix::from_diagonal(DiagonalMatrix::scalar(2, 4.0)),
            {8.0, 4.0}) == DenseVector{2.0, 1.0});
  CHECK_THROWS_AS(
      lower_triangular_solve(csr_from_triplets(2, {{0, 0, 1.0}}), {1.0, 1.0}),
      SingularMatrixError);

  SECTION("agrees with dense inverse on random lower-triangular") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t n : {3u, 10u, 50u}) {
      std::vector<Triplet> t;
      for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, 1.0 + std::abs(u(rng))});
        for (std::size_t j = 0; j < i; ++j) t.push_back({i, j, u(rng)});
      }
      const SparseMatrix a = SparseMatrix::from_triplets(n, t);
      DenseVector b(n);
      for (double& v : b) v = u(rng);
      const DenseVector x = lower_triangular_solve(a, b);
      const DenseVector y = dense_inverse(a).matvec(b);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(x[i] - y[i]) <= 1e-10 * (1.0 + std::abs(y[i])));
    }
  }
}

TEST_CASE("dense_inverse") {
  SECTION("2x2 formula") {
    const DenseMatrix inv = dense_inverse(kA2);
    CHECK(inv(0, 0) == Catch::Approx(4.0 / 15.0).margin(1e-14));
    CHECK(inv(0, 1) == Catch::Approx(1.0 / 15.0).margin(1e-14));
    CHECK(inv(1, 0) == Catch::Approx(1.0 / 15.0).margin(1e-14));
    CHECK(inv(1, 1) == Catch::Approx(4.0 / 15.0).margin(1e-14));
  }
  SECTION("identity and diagonal") {
    const DenseMatrix i = dense_inverse(SparseMatrix::identity(3));
    for (std::size_t r = 0; r < 3; ++r) CHECK(i(r, r) == 1.0);
    const DenseMatrix d = dense_inverse(
        SparseMatrix::from_diagonal(DiagonalMatrix(2, {2.0, 4.0})));
    CHECK(d(0, 0) == 0.5);
    CHECK(d(1, 1) == 0.25);
  }
  SECTION("residual bound on random matrices") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {5u, 20u, 60u}) {
      const SparseMatrix a = testsupport::random_sdd(rng, n);
      const DenseMatrix ad = DenseMatrix::from_sparse(a);
      const DenseMatrix res = ad * dense_inverse(a) - DenseMatrix::identity(n);
      CHECK(res.norm_inf() <= 1e-10 * static_cast<double>(n));
    }
  }
  SECTION("singular input") {
    CHECK_THROWS_AS(dense_inverse(csr_from_triplets(
                        2, {{0, 0, 1.0}, {1, 0, 1.0}})),
                    SingularMatrixError);
  }
  SECTION("size cap") {
    DenseMatrix big(cert_max_n() + 1);
    for (std::size_t i = 0; i < big.size(); ++i) big(i, i) = 1.0;
    CHECK_THROWS_AS(dense_inverse(big), SizeError);
  }
}

TEST_CASE("spectral_radius_nonneg") {
  CHECK(spectral_radius_nonneg(sparse_2x2(0, 1, 1, 0)).value ==
        Catch::Approx(1.0).margin(1e-9));
  CHECK(spectral_radius_nonneg(SparseMatrix::zero(3)).value ==
        Catch::Approx(0.0).margin(1e-11));
  CHECK(spectral_radius_nonneg(SparseMatrix::from_diagonal(
                                   DiagonalMatrix(2, {0.25, 0.1})))
            .value == Catch::Approx(0.25).margin(1e-9));

  SECTION("rejects negative entries") {
    CHECK_THROWS_AS(spectral_radius_nonneg(sparse_2x2(1, -1, 0, 1)), Error);
  }
  SECTION("agrees with long-run oracle, n <= 20") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng() % 19);
      const DenseMatrix a = testsupport::random_nonneg_dense(rng, n);
      const double expected = testsupport::power_iteration_oracle(a);
      CHECK(spectral_radius_nonneg(a).value ==
            Catch::Approx(expected).margin(1e-8));
    }
  }
  SECTION("exact on diagonal matrices") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
      DenseVector d(6);
      double mx = 0.0;
      for (double& v : d) {
        v = u(rng);
        mx = std::max(mx, v);
      }
      CHECK(spectral_radius_nonneg(SparseMatrix::from_diagonal(
                                       DiagonalMatrix(6, d)))
                .value == Catch::Approx(mx).margin(1e-9));
    }
  }
  SECTION("monotone in the entrywise order") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng() % 9);
      DenseMatrix a = testsupport::random_nonneg_dense(rng, n);
      DenseMatrix b(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = a(i, j) + u(rng);
      CHECK(spectral_radius_nonneg(a).value <=
            spectral_radius_nonneg(b).value + 1e-8);
    }
  }
}
