#include "ksglasso/prox.hpp"

#include <algorithm>
#include <cmath>

namespace ksglasso {

namespace {

double h_val(double y, double x, const Eigen::VectorXd& eigs, double beta) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) s += 1.0 / (y + eigs[i]);
  return (y - x) / beta - s;
}

double h_deriv(double y, const Eigen::VectorXd& eigs, double beta) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const double d = y + eigs[i];
    s += 1.0 / (d * d);
  }
  return 1.0 / beta + s;
}

}  // namespace

double psi_scalar(double x, const Eigen::VectorXd& eigs, double beta,
                  const PsiSolveParams& params) {
  if (eigs.size() == 0) throw std::invalid_argument("psi_scalar: empty eigenvalue list");
  if (!(beta > 0.0)) throw std::invalid_argument("psi_scalar: beta must be positive");
  if (!eigs.allFinite() || !std::isfinite(x))
    throw std::invalid_argument("psi_scalar: non-finite input");

  const double lam_min = eigs.minCoeff();
  const double t = static_cast<double>(eigs.size());
  // The root exceeds both x (the sum is positive on the domain) and -lam_min;
  // bounding the sum by t/(y + lam_min) gives (y - x)(y + lam_min) < beta*t,
  // whose positive root is the upper endpoint.
  double lo = std::max(x, -lam_min);
  double hi = 0.5 * (x - lam_min + std::sqrt((x + lam_min) * (x + lam_min) + 4.0 * beta * t));
  if (hi < lo) hi = lo;

  const double tol = params.root_tol_abs + params.root_tol_rel * (1.0 + std::abs(x));
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < params.max_newton_iters; ++it) {
    const double h = h_val(y, x, eigs, beta);
    if (std::abs(h) <= tol) return y;
    if (h > 0.0) hi = y; else lo = y;
    const double step = h / h_deriv(y, eigs, beta);
    double next = y - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect
    y = next;
  }
  // Budget exhausted: acceptable only if the bracket has collapsed to
  // roundoff width around the root.
  const double width_tol = params.bracket_pad * (1.0 + std::abs(lo) + std::abs(hi));
  if (hi - lo <= width_tol) return 0.5 * (lo + hi);
  throw NumericalError("psi_scalar: root solve did not converge");
}

ProxResult ks_prox(const SymMat& m, const Eigen::VectorXd& other_eigs, double beta,
                   const PsiSolveParams& params) {
  SpectralDecomp dec = sym_eig(m);
  const Eigen::VectorXd& mu = dec.eigenvalues;
  Eigen::VectorXd alpha(mu.size());
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    // Duplicate eigenvalues share one solve.
    if (j > 0 && mu[j] == mu[j - 1]) {
      alpha[j] = alpha[j - 1];
      continue;
    }
    alpha[j] = psi_scalar(mu[j], other_eigs, beta, params);
  }
  ProxResult r;
  r.value = SymMat::symmetrized(dec.vectors * alpha.asDiagonal() * dec.vectors.transpose());
  r.spec = {std::move(dec.vectors), std::move(alpha)};
  return r;
}

SymMat shrink_nonneg_diag(const SymMat& m, double threshold) {
  const int n = m.dim();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = std::max(0.0, m(i, i));
    for (int j = i + 1; j < n; ++j) {
      const double v = m(i, j);
      const double shrunk = std::max(std::abs(v) - threshold, 0.0);
      const double r = v < 0.0 ? -shrunk : shrunk;
      out(i, j) = r;
      out(j, i) = r;
    }
  }
  return SymMat::symmetrized(out);
}

}  // namespace ksglasso
