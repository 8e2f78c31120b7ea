#include "ksglasso/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ksglasso/kronsum.hpp"

namespace ksglasso {

namespace {

Eigen::MatrixXd offdiag(const SymMat& m) {
  Eigen::MatrixXd x = m.mat();
  x.diagonal().setZero();
  return x;
}

}  // namespace

double relative_error(const SymMat& est_row, const SymMat& est_col, const SymMat& truth_row,
                      const SymMat& truth_col) {
  if (est_row.dim() != truth_row.dim() || est_col.dim() != truth_col.dim()) {
    throw std::invalid_argument("estimate/truth dimension mismatch");
  }
  const double row_ref = offdiag(truth_row).norm();
  const double col_ref = offdiag(truth_col).norm();
  if (row_ref == 0.0 || col_ref == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double row_err = (offdiag(est_row) - offdiag(truth_row)).norm() / row_ref;
  const double col_err = (offdiag(est_col) - offdiag(truth_col)).norm() / col_ref;
  return 0.5 * (row_err + col_err);
}

double fscore(const SupportMask& est, const SupportMask& truth) {
  if (est.dim != truth.dim) throw std::invalid_argument("support dimension mismatch");
  long tp = 0, fp = 0, fn = 0;
  for (int i = 0; i < est.dim; ++i) {
    for (int j = i + 1; j < est.dim; ++j) {
      const bool e = est(i, j);
      const bool t = truth(i, j);
      tp += e && t;
      fp += e && !t;
      fn += !e && t;
    }
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double bic(const SymMat& row_hat, const SymMat& col_hat, const SymMat& row_sparse,
           const SymMat& col_sparse, const SymMat& row_cov, const SymMat& col_cov, int n,
           double zero_tol) {
  if (n < 1) throw std::invalid_argument("observation count must be at least 1");
  if (row_hat.dim() != row_cov.dim() || col_hat.dim() != col_cov.dim() ||
      row_sparse.dim() != row_hat.dim() || col_sparse.dim() != col_hat.dim()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const SpectralDecomp rs = sym_eig(row_hat);
  const SpectralDecomp cs = sym_eig(col_hat);
  const double logdet = ks_logdet(rs.eigenvalues, cs.eigenvalues);
  if (!std::isfinite(logdet)) return std::numeric_limits<double>::infinity();
  const double st = static_cast<double>(row_hat.dim()) * static_cast<double>(col_hat.dim());
  const double weight = 0.5 * std::log(static_cast<double>(n)) / n + 0.2 * std::log(st);
  const double count =
      static_cast<double>(offdiag_l0(row_sparse, zero_tol) + offdiag_l0(col_sparse, zero_tol));
  return -logdet + inner(col_hat, col_cov) + inner(row_hat, row_cov) + weight * count;
}

double sparsity_level(const SymMat& row_sparse, const SymMat& col_sparse, double zero_tol) {
  const double t = row_sparse.dim();
  const double s = col_sparse.dim();
  const double slots = t * (t - 1.0) + s * (s - 1.0);
  if (slots == 0.0) return 0.0;
  const double count =
      static_cast<double>(offdiag_l0(row_sparse, zero_tol) + offdiag_l0(col_sparse, zero_tol));
  return count / slots;
}

}  // namespace ksglasso
