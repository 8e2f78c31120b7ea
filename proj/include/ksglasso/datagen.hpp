#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "ksglasso/symmat.hpp"

namespace ksglasso {

/// Deterministic 64-bit generator with fixed real-valued mappings, so a seed
/// pins the produced numbers across platforms and build modes:
///   uniform01: top 53 bits of one mt19937_64 draw, scaled into [0, 1)
///   normal:    Box-Muller on (1 - uniform01, uniform01) with the second
///              deviate cached (1 - u keeps the log argument positive)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stateless 64-bit mixer used to derive independent per-observation
/// sub-seeds from one user seed.
std::uint64_t splitmix64(std::uint64_t x);

struct ObservationSet {
  int t = 0;
  int s = 0;
  std::vector<Eigen::MatrixXd> obs;  // each t x s

  int n() const { return static_cast<int>(obs.size()); }
};

struct GroundTruth {
  SymMat row_prec;  // t x t, PD
  SymMat col_prec;  // s x s, PD
  SupportMask support_row;
  SupportMask support_col;

  static GroundTruth from_factors(SymMat row, SymMat col);
};

struct CovariancePair {
  SymMat row_cov;  // (1/n) sum_k Z_k Z_k^T
  SymMat col_cov;  // (1/n) sum_k Z_k^T Z_k
};

/// Sample covariances of both axes. No mean-centering.
CovariancePair covariances(const ObservationSet& set);

/// Random sparse PD factor A A^T + 1e-4 I + Diag(d): A has iid entries equal
/// to 0 with probability max(0, 1 - 10/dim) and otherwise +-1 with equal
/// probability (about 10*dim nonzeros), d_i ~ U[0, 0.1]. Minimum eigenvalue
/// at least 1e-4.
SymMat gen_type1(int dim, std::uint64_t seed);

/// Block-diagonal variant: ten diagonal blocks of size dim/10, each built
/// like gen_type1 with zero-probability max(0, 1 - dim/block^2) (about dim
/// nonzeros per block). Requires dim >= 20 and 10 | dim.
SymMat gen_type2(int dim, std::uint64_t seed);

/// n observations Z with vec(Z) ~ N(0, inverse of the Kronecker sum of the
/// truth factors): scale iid normals by the reciprocal square roots of the
/// pairwise eigenvalue sums, then rotate by both eigenbases. Each observation
/// uses its own splitmix64-derived sub-seed, so the output is independent of
/// evaluation order.
ObservationSet sample_ks_gaussian(const GroundTruth& truth, int n, std::uint64_t seed);

}  // namespace ksglasso
