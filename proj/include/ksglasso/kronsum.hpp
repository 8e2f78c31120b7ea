#pragma once

#include "ksglasso/symmat.hpp"

namespace ksglasso {

// Kronecker sum of A in S^s and B in S^t:  A (+) B = A x I_t + I_s x B.
// Its spectrum is the set of all pairwise eigenvalue sums, which is what every
// routine here exploits; the dense matrix itself is built only as a test
// oracle.

/// log det of the Kronecker sum given the two factors' eigenvalue lists.
/// Returns -inf when some pairwise sum is <= 0 (the sum is not positive
/// definite, so the estimation objective is +inf).
double ks_logdet(const Eigen::VectorXd& a_eigs, const Eigen::VectorXd& b_eigs);

/// Smallest pairwise eigenvalue sum; the Kronecker sum is PD iff this is > 0.
double ks_min_eig(const Eigen::VectorXd& a_eigs, const Eigen::VectorXd& b_eigs);

/// Dense ts x ts Kronecker sum col_factor x I_t + I_s x row_factor, with the
/// index layout (i + t*j, i' + t*j'). Correctness oracle only; throws when
/// t*s exceeds the cap.
SymMat ks_dense(const SymMat& row_factor, const SymMat& col_factor, int cap = 4096);

/// Gradient of log det of the Kronecker sum with respect to the factor whose
/// decomposition is `target`: sum_i ( sum_j 1/(target_eig_i + other_eig_j) )
/// q_i q_i^T. Throws std::domain_error when the Kronecker sum is not PD.
SymMat ks_grad(const SpectralDecomp& target, const Eigen::VectorXd& other_eigs);

/// Sum of |a_ij| over all off-diagonal entries (both triangles).
double offdiag_l1(const SymMat& a);

/// Number of off-diagonal entries with |a_ij| > zero_tol (both triangles).
long offdiag_l0(const SymMat& a, double zero_tol = 0.0);

}  // namespace ksglasso
