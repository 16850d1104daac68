#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lrsplit/errors.hpp"
#include "lrsplit/linalg.hpp"
#include "lrsplit/problems.hpp"
#include "test_util.hpp"

using namespace lrsplit;
using lrsplit::testing::random_matrix;
using lrsplit::testing::random_symmetric;

TEST_CASE("qr_thin: identity factors trivially") {
  const DenseMatrix I = DenseMatrix::Identity(3, 3);
  const QRPair f = qr_thin(I);
  CHECK((f.Q - I).norm() < 1e-14);
  CHECK((f.R - I).norm() < 1e-14);
}

TEST_CASE("qr_thin: single column is normalized with positive R") {
  DenseMatrix M(2, 1);
  M << 3.0, 4.0;
  const QRPair f = qr_thin(M);
  CHECK(f.Q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(f.Q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(f.R(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("qr_thin: reassembly, orthonormality and sign convention") {
  std::mt19937 rng(71);
  for (auto [m, r] : {std::pair<Index, Index>{8, 3}, {4, 2}, {12, 12}, {30, 5}}) {
    const DenseMatrix M = random_matrix(rng, m, r);
    const QRPair f = qr_thin(M);
    CHECK((f.Q * f.R - M).norm() <= 1e-12 * M.norm());
    CHECK((f.Q.transpose() * f.Q - DenseMatrix::Identity(r, r)).norm() <=
          1e-12 * std::sqrt(static_cast<double>(r)));
    for (Index i = 0; i < r; ++i) {
      CHECK(f.R(i, i) >= 0.0);
      for (Index j = 0; j < i; ++j) CHECK(f.R(i, j) == 0.0);
    }
  }
}

TEST_CASE("qr_thin: rank-deficient input is reported") {
  std::mt19937 rng(5);
  DenseMatrix M(8, 3);
  M.col(0) = random_matrix(rng, 8, 1);
  M.col(1) = 2.0 * M.col(0);
  M.col(2) = random_matrix(rng, 8, 1);
  CHECK_THROWS_AS(qr_thin(M), RankDeficient);
  CHECK_NOTHROW(qr_thin_unchecked(M));
  const QRPair f = qr_thin_unchecked(M);
  CHECK((f.Q * f.R - M).norm() <= 1e-12 * M.norm());
  CHECK((f.Q.transpose() * f.Q - DenseMatrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("svd_full: diagonal and rank-one cases") {
  DenseMatrix D = DenseMatrix::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = 1.0;
  const auto s = svd_full(D);
  CHECK(s.sigma(0) == doctest::Approx(3.0));
  CHECK(s.sigma(1) == doctest::Approx(1.0));

  std::mt19937 rng(11);
  const DenseMatrix a = random_matrix(rng, 6, 1);
  const DenseMatrix b = random_matrix(rng, 6, 1);
  const auto s1 = svd_full(a * b.transpose());
  CHECK(s1.sigma(0) == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
  CHECK(s1.sigma(1) < 1e-13 * s1.sigma(0));
}

TEST_CASE("svd_full: Frobenius identity and reconstruction") {
  std::mt19937 rng(13);
  const DenseMatrix M = random_matrix(rng, 6, 6);
  const auto s = svd_full(M);
  CHECK(s.sigma.norm() == doctest::Approx(M.norm()).epsilon(1e-12));
  const DenseMatrix R = s.U * s.sigma.asDiagonal() * s.V.transpose();
  CHECK((R - M).norm() <= 1e-11 * M.norm());
  for (Index i = 0; i + 1 < s.sigma.size(); ++i) CHECK(s.sigma(i) >= s.sigma(i + 1));
}

TEST_CASE("expm_dense: closed forms") {
  CHECK((expm_dense(DenseMatrix::Zero(4, 4)) - DenseMatrix::Identity(4, 4)).norm() < 1e-14);

  DenseMatrix D = DenseMatrix::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = -1.0;
  const DenseMatrix E = expm_dense(D);
  CHECK(E(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  CHECK(E(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(std::abs(E(0, 1)) < 1e-15);

  DenseMatrix N = DenseMatrix::Zero(2, 2);
  N(0, 1) = 1.0;
  const DenseMatrix EN = expm_dense(N);
  CHECK(EN(0, 0) == doctest::Approx(1.0));
  CHECK(EN(0, 1) == doctest::Approx(1.0));
  CHECK(EN(1, 0) == doctest::Approx(0.0));
  CHECK(EN(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("expm_dense: group property e^{2A} = (e^A)^2") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix A = random_matrix(rng, 8, 8);
    A *= 0.9 / A.norm();
    const DenseMatrix E1 = expm_dense(A + A);
    const DenseMatrix E2 = expm_dense(A) * expm_dense(A);
    CHECK((E1 - E2).norm() <= 1e-10 * E1.norm());
  }
}

TEST_CASE("expm_dense: overflow and cap are reported") {
  DenseMatrix big(1, 1);
  big << 710.0;
  CHECK_THROWS_AS(expm_dense(big), Overflow);
  CHECK_THROWS_AS(expm_dense(DenseMatrix::Zero(kDenseCap + 1, kDenseCap + 1)),
                  std::invalid_argument);
}

TEST_CASE("expm_action: tau = 0 and diagonal operator") {
  std::mt19937 rng(19);
  const DenseMatrix B = random_matrix(rng, 6, 2);
  DenseMatrix D = DenseMatrix::Zero(6, 6);
  for (Index i = 0; i < 6; ++i) D(i, i) = -0.3 * static_cast<double>(i);
  const DenseOperator A{D};

  CHECK((expm_action(A, 0.0, B, ExpmMethod::Dense) - B).norm() == 0.0);
  CHECK((expm_action(A, 0.0, B, ExpmMethod::Krylov) - B).norm() == 0.0);

  const double tau = 0.7;
  for (ExpmMethod method : {ExpmMethod::Dense, ExpmMethod::Krylov}) {
    const DenseMatrix W = expm_action(A, tau, B, method);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 2; ++j)
        CHECK(W(i, j) == doctest::Approx(std::exp(tau * D(i, i)) * B(i, j)).epsilon(1e-10));
  }
}

TEST_CASE("expm_action: Krylov matches the dense exponential on a random symmetric matrix") {
  std::mt19937 rng(23);
  DenseMatrix S = random_symmetric(rng, 32);
  S *= 2.0 / S.norm();
  const DenseOperator A{S};
  const DenseMatrix B = random_matrix(rng, 32, 4);
  const DenseMatrix Wd = expm_action(A, 1.0, B, ExpmMethod::Dense);
  const DenseMatrix Wk = expm_action(A, 1.0, B, ExpmMethod::Krylov);
  CHECK((Wd - Wk).norm() <= 1e-9 * Wd.norm());
}

TEST_CASE("expm_action: Krylov agrees with dense on the preset operators") {
  std::mt19937 rng(29);
  const auto check_operator = [&](const LinearOperator& A, double tau) {
    const DenseMatrix B = random_matrix(rng, A.dim(), 4);
    const DenseMatrix Wd = expm_action(A, tau, B, ExpmMethod::Dense);
    const DenseMatrix Wk = expm_action(A, tau, B, ExpmMethod::Krylov);
    CHECK((Wd - Wk).norm() <= 1e-8 * std::max(Wd.norm(), B.norm()));
  };

  check_operator(*preset_reaction_diffusion(64).A, 0.01);
  check_operator(*preset_reaction_diffusion(256).A, 0.01);
  check_operator(*preset_dre(64, 9).A, 0.00625);
  check_operator(*preset_periodic_smooth(32).A, 0.01);
}

TEST_CASE("expm_action: stagnation at the basis cap is reported") {
  const Index n = 70;
  DenseMatrix A = DenseMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    A(i, i + 1) = 1e12;
    A(i + 1, i) = -1e12;
  }
  const DenseOperator op{A};
  const DenseMatrix B = DenseMatrix::Ones(n, 1);
  CHECK_THROWS_AS(expm_action(op, 1.0, B, ExpmMethod::Krylov), KrylovStagnation);
}

TEST_CASE("contraction: the exponential sandwich never expands for the preset operators") {
  std::mt19937 rng(31);
  const auto check_contraction = [&](const DenseMatrix& A) {
    for (double t : {0.01, 0.1, 1.0}) {
      const DenseMatrix E = expm_dense(t * A);
      for (int trial = 0; trial < 5; ++trial) {
        const DenseMatrix Z = random_matrix(rng, A.rows(), A.cols());
        CHECK((E * Z * E.transpose()).norm() <= Z.norm() * (1.0 + 1e-12));
      }
    }
  };
  check_contraction((1.0 / 50.0) * build_laplacian_1d(24, 1.0 / 25.0));
  check_contraction(build_variable_diffusion(
      24, [](double x) { return 2.0 + std::cos(2.0 * std::numbers::pi * x); }, 1.0));
}
