#include "ksglasso/kronsum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ksglasso {

double ks_logdet(const Eigen::VectorXd& a_eigs, const Eigen::VectorXd& b_eigs) {
  if (ks_min_eig(a_eigs, b_eigs) <= 0.0)
    return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a_eigs.size(); ++i)
    for (Eigen::Index j = 0; j < b_eigs.size(); ++j)
      acc += std::log(a_eigs[i] + b_eigs[j]);
  return acc;
}

double ks_min_eig(const Eigen::VectorXd& a_eigs, const Eigen::VectorXd& b_eigs) {
  if (!a_eigs.allFinite() || !b_eigs.allFinite())
    throw std::invalid_argument("ks_min_eig: non-finite eigenvalues");
  return a_eigs.minCoeff() + b_eigs.minCoeff();
}

SymMat ks_dense(const SymMat& row_factor, const SymMat& col_factor, int cap) {
  const int t = row_factor.dim();
  const int s = col_factor.dim();
  if (static_cast<long>(t) * s > cap)
    throw std::invalid_argument("ks_dense: t*s exceeds the oracle cap");
  Eigen::MatrixXd ks = Eigen::MatrixXd::Zero(t * s, t * s);
  for (int j = 0; j < s; ++j) {
    for (int jp = 0; jp < s; ++jp)
      ks.block(t * j, t * jp, t, t).diagonal().array() += col_factor(j, jp);
    ks.block(t * j, t * j, t, t) += row_factor.mat();
  }
  return SymMat::symmetrized(ks);
}

SymMat ks_grad(const SpectralDecomp& target, const Eigen::VectorXd& other_eigs) {
  const auto& lam = target.eigenvalues;
  if (lam.minCoeff() + other_eigs.minCoeff() <= 0.0)
    throw std::domain_error("ks_grad: Kronecker sum is not positive definite");
  Eigen::VectorXd coef(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    double c = 0.0;
    for (Eigen::Index j = 0; j < other_eigs.size(); ++j)
      c += 1.0 / (lam[i] + other_eigs[j]);
    coef[i] = c;
  }
  const Eigen::MatrixXd& q = target.vectors;
  return SymMat::symmetrized(q * coef.asDiagonal() * q.transpose());
}

double offdiag_l1(const SymMat& a) {
  const int n = a.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) acc += std::abs(a(i, j));
  return acc;
}

long offdiag_l0(const SymMat& a, double zero_tol) {
  const int n = a.dim();
  long count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(a(i, j)) > zero_tol) ++count;
  return count;
}

}  // namespace ksglasso
