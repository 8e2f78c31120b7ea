#pragma once

#include <stdexcept>

#include "ksglasso/symmat.hpp"

namespace ksglasso {

/// Signals a failed inner root solve (never thrown silently into a result).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Controls for the scalar root solves inside the log-det proximal maps.
struct PsiSolveParams {
  double root_tol_abs = 1e-12;
  double root_tol_rel = 1e-12;
  int max_newton_iters = 100;
  double bracket_pad = 1e-12;  // relative to the bracket's own scale
};

/// Solves (y - x)/beta = sum_i 1/(y + eigs_i) for the unique root
/// y > -min_i eigs_i. Safeguarded Newton inside the bracket
/// (max(x, -min eigs), upper bound from the quadratic envelope), bisection
/// fallback whenever a Newton step leaves the bracket. Throws NumericalError
/// if the iteration budget runs out before the bracket collapses.
double psi_scalar(double x, const Eigen::VectorXd& eigs, double beta,
                  const PsiSolveParams& params = {});

/// Proximal map of -beta log det of the Kronecker sum with the other factor
/// held fixed:  argmin_V 1/2 ||V - m||_F^2 - beta logdet KS(V, other).
/// Spectral: decompose m = Q diag(mu) Q^T, map each eigenvalue through
/// psi_scalar against other_eigs, return Q diag(alpha) Q^T together with that
/// decomposition (alpha inherits mu's ascending order since psi is
/// increasing). The result keeps the Kronecker sum with the other factor PD.
struct ProxResult {
  SymMat value;
  SpectralDecomp spec;
};

ProxResult ks_prox(const SymMat& m, const Eigen::VectorXd& other_eigs, double beta,
                   const PsiSolveParams& params = {});

/// Elementwise proximal map of the penalty "l1 on off-diagonals, nonnegative
/// diagonal": diagonal entries clamp at 0, off-diagonals soft-threshold.
SymMat shrink_nonneg_diag(const SymMat& m, double threshold);

}  // namespace ksglasso
