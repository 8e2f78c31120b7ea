#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "doctest.h"
#include "ksglasso/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ksglasso;
using testutil::random_pd;
using testutil::random_sym;

TEST_CASE("relative error compares only the off-diagonal parts") {
  std::mt19937_64 rng(61);
  const SymMat tr = random_pd(rng, 4, 0.3);
  const SymMat tc = random_pd(rng, 3, 0.3);
  CHECK(relative_error(tr, tc, tr, tc) == 0.0);

  // doubling one factor's off-diagonal gives exactly 1 for that term
  SymMat er = tr;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) er.set(i, j, 2.0 * tr(i, j));
  }
  CHECK(relative_error(er, tc, tr, tc) == doctest::Approx(0.5).epsilon(1e-12));

  // diagonal perturbations are invisible
  const SymMat shifted_row = tr + 3.7 * SymMat::identity(4);
  const SymMat shifted_col = tc + (-1.2) * SymMat::identity(3);
  CHECK(relative_error(shifted_row, shifted_col, tr, tc) == 0.0);

  // diagonal truth factor: undefined
  CHECK(std::isnan(relative_error(tr, tc, tr, SymMat::identity(3))));
  CHECK(std::isnan(relative_error(tr, tc, SymMat::identity(4), tc)));

  CHECK_THROWS_AS(relative_error(SymMat::identity(3), tc, tr, tc), std::invalid_argument);

  // against a scalar brute force
  const SymMat ar = random_sym(rng, 4, 1.0);
  const SymMat ac = random_sym(rng, 3, 1.0);
  double num_r = 0.0, den_r = 0.0, num_c = 0.0, den_c = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      num_r += (ar(i, j) - tr(i, j)) * (ar(i, j) - tr(i, j));
      den_r += tr(i, j) * tr(i, j);
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      num_c += (ac(i, j) - tc(i, j)) * (ac(i, j) - tc(i, j));
      den_c += tc(i, j) * tc(i, j);
    }
  }
  const double expect = 0.5 * (std::sqrt(num_r / den_r) + std::sqrt(num_c / den_c));
  CHECK(relative_error(ar, ac, tr, tc) == doctest::Approx(expect).epsilon(1e-12));
}

namespace {

SupportMask mask_of(int dim, const std::set<std::pair<int, int>>& pairs) {
  SymMat m(dim);
  for (const auto& [i, j] : pairs) m.set(i, j, 1.0);
  return support_of(m);
}

}  // namespace

TEST_CASE("support f-score counts unordered pairs") {
  const SupportMask truth = mask_of(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(fscore(truth, truth) == 1.0);

  // one hit, one false alarm, two misses: 2*1 / (2*1 + 1 + 2)
  const SupportMask est = mask_of(4, {{0, 1}, {0, 3}});
  CHECK(fscore(est, truth) == doctest::Approx(2.0 / 5.0).epsilon(1e-15));

  // empty against empty is perfect by convention
  CHECK(fscore(mask_of(3, {}), mask_of(3, {})) == 1.0);
  // empty against nonempty is zero
  CHECK(fscore(mask_of(4, {}), truth) == 0.0);
  CHECK(fscore(truth, mask_of(4, {})) == 0.0);

  CHECK_THROWS_AS(fscore(mask_of(3, {}), mask_of(4, {})), std::invalid_argument);

  // randomized agreement with explicit set arithmetic
  std::mt19937_64 rng(62);
  for (int rep = 0; rep < 10; ++rep) {
    const int dim = 5;
    std::set<std::pair<int, int>> se, st;
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        if (rng() % 2) se.insert({i, j});
        if (rng() % 2) st.insert({i, j});
      }
    }
    long tp = 0;
    for (const auto& p : se) tp += st.count(p);
    const long fp = static_cast<long>(se.size()) - tp;
    const long fn = static_cast<long>(st.size()) - tp;
    const double expect =
        (tp + fp + fn == 0) ? 1.0 : 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
    CHECK(fscore(mask_of(dim, se), mask_of(dim, st)) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("information criterion matches its hand-computed form") {
  SymMat row_hat(2);
  row_hat.set(0, 0, 2.0);
  row_hat.set(1, 1, 2.0);
  row_hat.set(0, 1, 0.3);
  SymMat col_hat = SymMat::diag(Eigen::Vector2d(1.5, 1.5));
  const SymMat row_cov = SymMat::identity(2);
  const SymMat col_cov = SymMat::identity(2);
  const int n = 4;

  const double logdet = oracle::logdet_chol(oracle::kron_sum(row_hat.mat(), col_hat.mat()));
  const double weight = 0.5 * std::log(4.0) / 4.0 + 0.2 * std::log(4.0);
  const double expect = -logdet + col_hat.trace() + row_hat.trace() + weight * 2.0;
  const double got = bic(row_hat, col_hat, row_hat, col_hat, row_cov, col_cov, n);
  CHECK(std::abs(got - expect) <= 1e-12 * (1.0 + std::abs(expect)));

  // with n = 1 the sample-size term vanishes
  const double got1 = bic(row_hat, col_hat, row_hat, col_hat, row_cov, col_cov, 1);
  const double expect1 = -logdet + col_hat.trace() + row_hat.trace() + 0.2 * std::log(4.0) * 2.0;
  CHECK(std::abs(got1 - expect1) <= 1e-12 * (1.0 + std::abs(expect1)));

  // a new off-diagonal nonzero in a sparse copy costs exactly 2*weight
  SymMat denser = col_hat;
  denser.set(0, 1, 1e-9);
  const double bumped = bic(row_hat, col_hat, row_hat, denser, row_cov, col_cov, n);
  CHECK(std::abs(bumped - got - 2.0 * weight) <= 1e-12 * (1.0 + std::abs(got)));

  // indefinite joint matrix: infinite criterion
  SymMat bad(2);
  bad.set(0, 1, 5.0);
  CHECK(std::isinf(bic(bad, col_hat, bad, col_hat, row_cov, col_cov, n)));

  CHECK_THROWS_AS(bic(row_hat, col_hat, row_hat, col_hat, row_cov, col_cov, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      bic(row_hat, col_hat, row_hat, col_hat, SymMat::identity(3), col_cov, n),
      std::invalid_argument);
}

TEST_CASE("sparsity level pools both factors' off-diagonals") {
  CHECK(sparsity_level(SymMat::identity(3), SymMat::identity(2)) == 0.0);

  SymMat dense_row(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) dense_row.set(i, j, 1.0);
  }
  SymMat dense_col(2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) dense_col.set(i, j, 1.0);
  }
  CHECK(sparsity_level(dense_row, dense_col) == 1.0);

  // t=3 with one unordered pair set (2 entries), s=2 empty: 2 / (6 + 2)
  SymMat one_pair(3);
  one_pair.set(0, 1, 0.5);
  CHECK(sparsity_level(one_pair, SymMat::identity(2)) == doctest::Approx(0.25).epsilon(1e-15));

  // entries at or below the tolerance are treated as zeros
  SymMat faint(3);
  faint.set(0, 1, 1e-9);
  faint.set(0, 2, 0.5);
  CHECK(sparsity_level(faint, SymMat::identity(2), 1e-8) ==
        doctest::Approx(2.0 / 8.0).epsilon(1e-15));
}
