#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ksglasso/kronsum.hpp"
#include "ksglasso/symmat.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ksglasso;
using testutil::random_pd;
using testutil::random_sym;

TEST_CASE("SymMat construction and accessors") {
  SymMat z(3);
  CHECK(z.dim() == 3);
  CHECK(z.max_abs() == 0.0);

  SymMat id = SymMat::identity(4);
  CHECK(id.trace() == 4.0);
  CHECK(id(2, 2) == 1.0);
  CHECK(id(0, 1) == 0.0);

  Eigen::VectorXd d(3);
  d << 1.0, -2.0, 3.0;
  SymMat dm = SymMat::diag(d);
  CHECK(dm(1, 1) == -2.0);
  CHECK(dm.min_diag() == -2.0);

  SymMat m(3);
  m.set(0, 2, 5.0);
  CHECK(m(0, 2) == 5.0);
  CHECK(m(2, 0) == 5.0);
  CHECK(m.frob_norm() == doctest::Approx(std::sqrt(50.0)));
}

TEST_CASE("SymMat::from_dense validates symmetry and finiteness") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 2.0, 1.0;
  CHECK_NOTHROW(SymMat::from_dense(a));

  // Asymmetry below 1e-8 * (1 + max|A|) is averaged away.
  Eigen::MatrixXd small = a;
  small(0, 1) += 1e-9;
  const SymMat sm = SymMat::from_dense(small);
  CHECK(sm(0, 1) == sm(1, 0));
  CHECK(sm(0, 1) == doctest::Approx(2.0 + 0.5e-9).epsilon(1e-12));

  // Asymmetry above the threshold is rejected.
  Eigen::MatrixXd big = a;
  big(0, 1) += 1e-6;
  CHECK_THROWS_AS(SymMat::from_dense(big), std::invalid_argument);

  Eigen::MatrixXd nf = a;
  nf(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMat::from_dense(nf), std::invalid_argument);
  nf(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SymMat::from_dense(nf), std::invalid_argument);

  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(SymMat::from_dense(rect), std::invalid_argument);
}

TEST_CASE("SymMat::symmetrized averages without checking") {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 4.0, 0.0, 0.0;
  const SymMat m = SymMat::symmetrized(a);
  CHECK(m(0, 1) == 2.0);
  CHECK(m(1, 0) == 2.0);
}

TEST_CASE("SymMat arithmetic stays symmetric and inner is the Frobenius product") {
  std::mt19937_64 rng(11);
  const SymMat a = random_sym(rng, 5);
  const SymMat b = random_sym(rng, 5);
  const SymMat c = a + 2.0 * b - b;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(c(i, j) == c(j, i));
      CHECK(c(i, j) == doctest::Approx(a(i, j) + b(i, j)).epsilon(1e-14));
    }
  }
  double ip = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) ip += a(i, j) * b(i, j);
  }
  CHECK(inner(a, b) == doctest::Approx(ip).epsilon(1e-13));
}

TEST_CASE("sym_eig invariants: orthogonality, reconstruction, ordering, counter") {
  std::mt19937_64 rng(21);
  const SymMat a = random_sym(rng, 20, 3.0);
  const std::uint64_t before = sym_eig_count();
  const SpectralDecomp d = sym_eig(a);
  CHECK(sym_eig_count() == before + 1);

  const Eigen::MatrixXd qtq = d.vectors.transpose() * d.vectors;
  CHECK((qtq - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() <= 1e-10);

  const Eigen::MatrixXd rec =
      d.vectors * d.eigenvalues.asDiagonal() * d.vectors.transpose();
  CHECK((rec - a.mat()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + a.max_abs()));

  for (int i = 1; i < 20; ++i) CHECK(d.eigenvalues[i] >= d.eigenvalues[i - 1]);

  // Identical input bits give identical output bits.
  const SpectralDecomp d2 = sym_eig(a);
  CHECK((d.vectors - d2.vectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.eigenvalues - d2.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sym_eig rejects non-finite input; identity decomposition is free") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.0, 0.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sym_eig(SymMat::symmetrized(bad)), std::invalid_argument);

  const std::uint64_t before = sym_eig_count();
  const SpectralDecomp id = SpectralDecomp::identity(3);
  CHECK(sym_eig_count() == before);  // no solver call
  CHECK(id.vectors == Eigen::MatrixXd::Identity(3, 3));
  CHECK(id.eigenvalues == Eigen::VectorXd::Ones(3));
}

TEST_CASE("support_of extracts the off-diagonal pattern") {
  SymMat m(3);
  m.set(0, 1, 0.5);
  m.set(1, 2, 1e-12);
  m.set(0, 0, 7.0);  // diagonal never counts
  const SupportMask exact = support_of(m);
  CHECK(exact.dim == 3);
  CHECK(exact(0, 1));
  CHECK(exact(1, 0));
  CHECK(exact(1, 2));
  CHECK_FALSE(exact(0, 2));
  CHECK_FALSE(exact(0, 0));

  const SupportMask tol = support_of(m, 1e-9);
  CHECK(tol(0, 1));
  CHECK_FALSE(tol(1, 2));
  CHECK(exact == support_of(m));
  CHECK_FALSE(exact == tol);
}

TEST_CASE("ks_dense matches the entrywise oracle and honors the size cap") {
  std::mt19937_64 rng(33);
  const SymMat g = random_sym(rng, 4);
  const SymMat o = random_sym(rng, 3);
  const SymMat ks = ks_dense(g, o);
  REQUIRE(ks.dim() == 12);
  const Eigen::MatrixXd ref = oracle::kron_sum(g.mat(), o.mat());
  CHECK((ks.mat() - ref).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(ks_dense(g, o, 11), std::invalid_argument);
  CHECK_NOTHROW(ks_dense(g, o, 12));
}

TEST_CASE("ks_logdet equals the dense Cholesky value on PD pairs") {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 10; ++rep) {
    const int t = 2 + static_cast<int>(rng() % 5);
    const int s = 2 + static_cast<int>(rng() % 5);
    const SymMat g = random_pd(rng, t);
    const SymMat o = random_pd(rng, s);
    const double lib = ks_logdet(sym_eig(g).eigenvalues, sym_eig(o).eigenvalues);
    const double ref = oracle::logdet_chol(oracle::kron_sum(g.mat(), o.mat()));
    CHECK(std::abs(lib - ref) <= 1e-10 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("ks_logdet is -inf and ks_min_eig matches on indefinite sums") {
  Eigen::VectorXd a(2), b(2);
  a << -1.0, 2.0;
  b << 0.5, 3.0;
  CHECK(ks_min_eig(a, b) == doctest::Approx(-0.5));
  CHECK(ks_logdet(a, b) == -std::numeric_limits<double>::infinity());

  std::mt19937_64 rng(55);
  const SymMat g = random_sym(rng, 3);
  const SymMat o = random_sym(rng, 4);
  const Eigen::VectorXd ge = sym_eig(g).eigenvalues;
  const Eigen::VectorXd oe = sym_eig(o).eigenvalues;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(oracle::kron_sum(g.mat(), o.mat()));
  CHECK(ks_min_eig(ge, oe) ==
        doctest::Approx(dense.eigenvalues().minCoeff()).epsilon(1e-10));
}

TEST_CASE("ks_grad matches dense partial traces and directional finite differences") {
  std::mt19937_64 rng(66);
  for (int rep = 0; rep < 5; ++rep) {
    const int t = 2 + static_cast<int>(rng() % 3);
    const int s = 2 + static_cast<int>(rng() % 3);
    const SymMat g = random_pd(rng, t, 0.3);
    const SymMat o = random_pd(rng, s, 0.3);
    const SpectralDecomp gs = sym_eig(g);
    const SpectralDecomp os = sym_eig(o);

    const SymMat grad_g = ks_grad(gs, os.eigenvalues);
    const SymMat grad_o = ks_grad(os, gs.eigenvalues);
    const Eigen::MatrixXd ref_g = oracle::grad_logdet_row(g.mat(), o.mat());
    const Eigen::MatrixXd ref_o = oracle::grad_logdet_col(g.mat(), o.mat());
    CHECK((grad_g.mat() - ref_g).norm() <= 1e-10 * (1.0 + ref_g.norm()));
    CHECK((grad_o.mat() - ref_o).norm() <= 1e-10 * (1.0 + ref_o.norm()));

    // Directional finite differences of the dense log-determinant.
    const SymMat dir = random_sym(rng, t);
    const double h = 1e-5;
    Eigen::MatrixXd plus = g.mat() + h * dir.mat();
    Eigen::MatrixXd minus = g.mat() - h * dir.mat();
    const double fd = (oracle::logdet_chol(oracle::kron_sum(plus, o.mat())) -
                       oracle::logdet_chol(oracle::kron_sum(minus, o.mat()))) /
                      (2.0 * h);
    const double an = inner(grad_g, dir);
    CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("ks_grad requires a PD Kronecker sum") {
  const SpectralDecomp id = SpectralDecomp::identity(2);
  Eigen::VectorXd other(2);
  other << -1.5, 0.0;  // pairwise sums include 1 - 1.5 < 0
  CHECK_THROWS_AS(ks_grad(id, other), std::domain_error);
}

TEST_CASE("offdiag_l1 and offdiag_l0 against brute force") {
  std::mt19937_64 rng(77);
  SymMat m = random_sym(rng, 6);
  m.set(0, 3, 0.0);
  m.set(2, 4, 1e-13);
  double l1 = 0.0;
  long l0 = 0, l0tol = 0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      l1 += std::abs(m(i, j));
      l0 += m(i, j) != 0.0;
      l0tol += std::abs(m(i, j)) > 1e-12;
    }
  }
  CHECK(offdiag_l1(m) == doctest::Approx(l1).epsilon(1e-14));
  CHECK(offdiag_l0(m) == l0);
  CHECK(offdiag_l0(m, 1e-12) == l0tol);
}
