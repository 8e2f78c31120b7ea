#pragma once

// Reference implementations used only by the tests. Everything here works on
// the dense assembled problem with textbook methods (Cholesky, bisection,
// (accelerated) proximal gradient), independent of the library's spectral
// shortcuts, so agreement is meaningful.

#include <Eigen/Dense>

namespace oracle {

/// Kronecker sum assembled entry by entry:
/// out[i + t*j, i' + t*j'] = (i==i') * omega(j, j') + (j==j') * gamma(i, i').
Eigen::MatrixXd kron_sum(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& omega);

/// log det via Cholesky; -inf when the matrix is not PD.
double logdet_chol(const Eigen::MatrixXd& a);

/// Gradients of logdet(kron_sum(gamma, omega)) by partial traces of the dense
/// inverse.
Eigen::MatrixXd grad_logdet_row(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& omega);
Eigen::MatrixXd grad_logdet_col(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& omega);

/// Root of (y - x)/beta = sum_i 1/(y + eigs_i) on (-min eig, inf), by plain
/// bisection to near machine precision.
double psi_bisect(double x, const Eigen::VectorXd& eigs, double beta);

/// argmin_G 0.5*||G - M||_F^2 - beta * logdet kron_sum(G, Diag(other_eigs)),
/// by accelerated descent with backtracking (the domain is open; backtracking
/// rejects non-PD trial points).
Eigen::MatrixXd prox_gd(const Eigen::MatrixXd& m, const Eigen::VectorXd& other_eigs, double beta);

/// Off-diagonal soft-threshold plus diagonal clamp at zero (the proximal map
/// of the penalty-plus-constraint term), written directly.
Eigen::MatrixXd shrink_ref(const Eigen::MatrixXd& m, double thr);

/// Full objective of the joint problem on dense inputs; +inf off the domain.
double dense_objective(const Eigen::MatrixXd& g, const Eigen::MatrixXd& o,
                       const Eigen::MatrixXd& row_cov, const Eigen::MatrixXd& col_cov,
                       double row_weight, double col_weight);

/// Joint minimization of dense_objective by monotone FISTA with backtracking.
struct DenseSolveResult {
  Eigen::MatrixXd row;
  Eigen::MatrixXd col;
  double objective = 0.0;
  int iterations = 0;
};
DenseSolveResult solve_dense(const Eigen::MatrixXd& row_cov, const Eigen::MatrixXd& col_cov,
                             double row_weight, double col_weight, int max_iters = 300000,
                             double step_tol = 1e-12);

}  // namespace oracle
