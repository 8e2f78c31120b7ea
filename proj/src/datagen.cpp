#include "ksglasso/datagen.hpp"

#include <cmath>
#include <stdexcept>

namespace ksglasso {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = kTwoPi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

GroundTruth GroundTruth::from_factors(SymMat row, SymMat col) {
  GroundTruth g;
  g.support_row = support_of(row);
  g.support_col = support_of(col);
  g.row_prec = std::move(row);
  g.col_prec = std::move(col);
  return g;
}

CovariancePair covariances(const ObservationSet& set) {
  if (set.obs.empty()) throw std::invalid_argument("observation set is empty");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(set.t, set.t);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(set.s, set.s);
  for (const Eigen::MatrixXd& z : set.obs) {
    if (z.rows() != set.t || z.cols() != set.s) {
      throw std::invalid_argument("observation shape mismatch");
    }
    r += z * z.transpose();
    w += z.transpose() * z;
  }
  const double inv = 1.0 / set.n();
  return CovariancePair{SymMat::symmetrized(inv * r), SymMat::symmetrized(inv * w)};
}

namespace {

/// iid entries from {0, -1, +1} with P(0) = zero_prob, filled row-major.
Eigen::MatrixXd sign_matrix(Rng& rng, int dim, double zero_prob) {
  const double half = zero_prob + 0.5 * (1.0 - zero_prob);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double u = rng.uniform01();
      a(i, j) = u < zero_prob ? 0.0 : (u < half ? -1.0 : 1.0);
    }
  }
  return a;
}

/// A A^T + 1e-4 I + Diag(d), diagonal jitter drawn after A.
SymMat finish_factor(const Eigen::MatrixXd& a, Rng& rng) {
  Eigen::MatrixXd g = a * a.transpose();
  for (int i = 0; i < g.rows(); ++i) g(i, i) += 1e-4 + 0.1 * rng.uniform01();
  return SymMat::symmetrized(g);
}

}  // namespace

SymMat gen_type1(int dim, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("factor dimension must be at least 2");
  Rng rng(seed);
  const double rho = std::max(0.0, 1.0 - 10.0 / dim);
  const Eigen::MatrixXd a = sign_matrix(rng, dim, rho);
  return finish_factor(a, rng);
}

SymMat gen_type2(int dim, std::uint64_t seed) {
  if (dim < 20 || dim % 10 != 0) {
    throw std::invalid_argument("ten-block factor needs dimension >= 20 and divisible by 10");
  }
  Rng rng(seed);
  const int b = dim / 10;
  const double rho =
      std::max(0.0, 1.0 - static_cast<double>(dim) / (static_cast<double>(b) * b));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int blk = 0; blk < 10; ++blk) {
    a.block(blk * b, blk * b, b, b) = sign_matrix(rng, b, rho);
  }
  return finish_factor(a, rng);
}

ObservationSet sample_ks_gaussian(const GroundTruth& truth, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one observation");
  const SpectralDecomp rs = sym_eig(truth.row_prec);
  const SpectralDecomp cs = sym_eig(truth.col_prec);
  if (!(rs.eigenvalues.minCoeff() > 0.0) || !(cs.eigenvalues.minCoeff() > 0.0)) {
    throw std::domain_error("truth factors must be positive definite");
  }
  const int t = truth.row_prec.dim();
  const int s = truth.col_prec.dim();
  ObservationSet out;
  out.t = t;
  out.s = s;
  out.obs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Rng rng(splitmix64(seed + kGolden * static_cast<std::uint64_t>(k + 1)));
    Eigen::MatrixXd f(t, s);
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < s; ++j) {
        f(i, j) = rng.normal() / std::sqrt(rs.eigenvalues[i] + cs.eigenvalues[j]);
      }
    }
    out.obs.push_back(rs.vectors * f * cs.vectors.transpose());
  }
  return out;
}

}  // namespace ksglasso
