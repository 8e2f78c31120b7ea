#pragma once

#include "ksglasso/symmat.hpp"

namespace ksglasso {

struct MetricReport {
  double rel_error = 0.0;  // NaN when a truth factor has no off-diagonal mass
  double fscore_row = 0.0;
  double fscore_col = 0.0;
  double fscore_avg = 0.0;  // (fscore_row + fscore_col) / 2
  double bic = 0.0;
  double sparsity = 0.0;
};

/// Mean of the two per-factor relative off-diagonal Frobenius errors
/// (diagonals are zeroed before comparing, since only the diagonal sum of the
/// pair is identified). NaN when either truth factor is diagonal.
double relative_error(const SymMat& est_row, const SymMat& est_col, const SymMat& truth_row,
                      const SymMat& truth_col);

/// 2*tp / (2*tp + fp + fn) over unordered off-diagonal pairs; 1 when both
/// supports are empty.
double fscore(const SupportMask& est, const SupportMask& truth);

/// Information criterion for picking the penalty level: negative log-det fit
/// of the reconstructed pair plus (0.5*log(n)/n + 0.2*log(s*t)) times the
/// off-diagonal nonzero count of the sparse copies (both triangles).
double bic(const SymMat& row_hat, const SymMat& col_hat, const SymMat& row_sparse,
           const SymMat& col_sparse, const SymMat& row_cov, const SymMat& col_cov, int n,
           double zero_tol = 0.0);

/// Fraction of off-diagonal entries that are nonzero, pooled over both
/// factors: (count_row + count_col) / (t(t-1) + s(s-1)).
double sparsity_level(const SymMat& row_sparse, const SymMat& col_sparse, double zero_tol = 0.0);

}  // namespace ksglasso
