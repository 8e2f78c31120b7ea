#include "ksglasso/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ksglasso/kronsum.hpp"

namespace ksglasso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_penalty(const PenaltyParams& p) {
  if (!std::isfinite(p.row_weight) || !std::isfinite(p.col_weight) || p.row_weight < 0.0 ||
      p.col_weight < 0.0) {
    throw std::invalid_argument("penalty weights must be finite and nonnegative");
  }
}

void check_config(const AdmmConfig& c) {
  if (!std::isfinite(c.sigma) || c.sigma <= 0.0) {
    throw std::invalid_argument("sigma must be positive");
  }
  if (!std::isfinite(c.tau) || c.tau <= 0.0 || c.tau > 1.618) {
    throw std::invalid_argument("tau must lie in (0, 1.618]");
  }
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (c.max_iters < 1) throw std::invalid_argument("max iteration count must be at least 1");
  if (c.trace_every < 1) throw std::invalid_argument("trace stride must be at least 1");
  if (c.warm_start && (c.warm_max_iters < 1 || !(c.warm_tol > 0.0))) {
    throw std::invalid_argument("warm start needs a positive tolerance and iteration budget");
  }
}

/// -logdet + <O, W> + <G, R> + weighted off-diagonal l1. No diagonal-sign
/// indicator: callers on the solve path know their iterates, and the final
/// reconstructed pair is PD anyway.
double penalized_value(double logdet, const SymMat& g, const SymMat& o, const SymMat& row_cov,
                       const SymMat& col_cov, const PenaltyParams& pen) {
  if (!std::isfinite(logdet)) return kInf;
  return -logdet + inner(o, col_cov) + inner(g, row_cov) + pen.row_weight * offdiag_l1(g) +
         pen.col_weight * offdiag_l1(o);
}

/// Shift that makes both factors individually PD without changing their
/// Kronecker sum. Zero when both already clear a scale-relative PD margin.
double pd_shift(const Eigen::VectorXd& row_eigs, const Eigen::VectorXd& col_eigs) {
  const double rmin = row_eigs.minCoeff();
  const double cmin = col_eigs.minCoeff();
  if (!(rmin + cmin > 0.0)) {
    throw std::domain_error("Kronecker sum is not positive definite; no PD factor split exists");
  }
  const double scale = std::max(row_eigs.cwiseAbs().maxCoeff(), col_eigs.cwiseAbs().maxCoeff());
  const double margin = 1e-12 * (1.0 + scale);
  if (rmin > margin && cmin > margin) return 0.0;
  return 0.5 * (rmin - cmin);
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PenaltyParams PenaltyParams::from_lambda0(double lambda0, int t, int s) {
  PenaltyParams p;
  p.lambda0 = lambda0;
  p.row_weight = lambda0 * static_cast<double>(s);
  p.col_weight = lambda0 * static_cast<double>(t);
  return p;
}

AdmmState make_initial_state(int t, int s) {
  return AdmmState{SymMat::identity(t), SymMat::identity(s), SymMat::identity(t),
                   SymMat::identity(s), SymMat::identity(s), SymMat(t),
                   SymMat(s),           SymMat(s),           SpectralDecomp::identity(t),
                   SpectralDecomp::identity(s)};
}

double objective(const SymMat& row_prec, const SymMat& col_prec, const SymMat& row_cov,
                 const SymMat& col_cov, const PenaltyParams& penalty) {
  if (row_prec.dim() != row_cov.dim() || col_prec.dim() != col_cov.dim()) {
    throw std::invalid_argument("factor/covariance dimension mismatch");
  }
  if (row_prec.min_diag() < 0.0 || col_prec.min_diag() < 0.0) return kInf;
  const SpectralDecomp rs = sym_eig(row_prec);
  const SpectralDecomp cs = sym_eig(col_prec);
  return penalized_value(ks_logdet(rs.eigenvalues, cs.eigenvalues), row_prec, col_prec, row_cov,
                         col_cov, penalty);
}

ValidationResult validate_inputs(const SymMat& row_cov, const SymMat& col_cov) {
  const auto check = [](const SymMat& cov, const char* axis, const char* unit) {
    const double mean_diag = cov.dim() > 0 ? cov.trace() / cov.dim() : 0.0;
    const double floor = 1e-12 * mean_diag;
    for (int i = 0; i < cov.dim(); ++i) {
      if (!(cov(i, i) > floor)) {
        std::ostringstream msg;
        msg << axis << " covariance has a numerically zero diagonal at index " << i
            << ": the " << i << "-th " << unit
            << " of every observation is identically zero. Remove that " << unit
            << " from all observations and re-run.";
        return ValidationResult{false, msg.str()};
      }
    }
    return ValidationResult{};
  };
  ValidationResult r = check(row_cov, "row", "row");
  if (!r.ok) return r;
  return check(col_cov, "column", "column");
}

void admm_iterate(AdmmState& st, const SymMat& row_cov, const SymMat& col_cov,
                  const PenaltyParams& penalty, const AdmmConfig& config) {
  const double sigma = config.sigma;
  const double inv = 1.0 / sigma;
  const double step = config.tau * sigma;

  // Block 1: row factor via its prox (old column spectrum), then the column
  // duplicate in closed form (old sparse copy / old column factor).
  ProxResult row = ks_prox(st.row_sparse + inv * st.mult_row - inv * row_cov,
                           st.col_spec.eigenvalues, inv, config.psi);
  st.row_prec = std::move(row.value);
  st.row_spec = std::move(row.spec);
  st.col_dup = 0.5 * (st.col_sparse + st.col_prec + inv * (st.mult_col + st.mult_dup - col_cov));

  // Block 2: both shrinkage copies, then the column factor via its prox
  // against the fresh row spectrum.
  st.row_sparse = shrink_nonneg_diag(st.row_prec - inv * st.mult_row, penalty.row_weight * inv);
  st.col_sparse = shrink_nonneg_diag(st.col_dup - inv * st.mult_col, penalty.col_weight * inv);
  ProxResult col =
      ks_prox(st.col_dup - inv * st.mult_dup, st.row_spec.eigenvalues, inv, config.psi);
  st.col_prec = std::move(col.value);
  st.col_spec = std::move(col.spec);

  // Dual ascent.
  st.mult_row -= step * (st.row_prec - st.row_sparse);
  st.mult_col -= step * (st.col_dup - st.col_sparse);
  st.mult_dup -= step * (st.col_dup - st.col_prec);
}

void variant_iterate(AdmmState& st, const SymMat& row_cov, const SymMat& col_cov,
                     const PenaltyParams& penalty, const AdmmConfig& config) {
  const double sigma = config.sigma;
  const double inv = 1.0 / sigma;
  const double step = config.tau * sigma;

  ProxResult row = ks_prox(st.row_sparse + inv * st.mult_row - inv * row_cov,
                           st.col_spec.eigenvalues, inv, config.psi);
  st.row_prec = std::move(row.value);
  st.row_spec = std::move(row.spec);
  ProxResult col = ks_prox(st.col_sparse + inv * st.mult_col - inv * col_cov,
                           st.row_spec.eigenvalues, inv, config.psi);
  st.col_prec = std::move(col.value);
  st.col_spec = std::move(col.spec);

  st.row_sparse = shrink_nonneg_diag(st.row_prec - inv * st.mult_row, penalty.row_weight * inv);
  st.col_sparse = shrink_nonneg_diag(st.col_prec - inv * st.mult_col, penalty.col_weight * inv);

  st.mult_row -= step * (st.row_prec - st.row_sparse);
  st.mult_col -= step * (st.col_prec - st.col_sparse);
}

KktResiduals kkt_residuals(const AdmmState& st, const SymMat& row_cov, const SymMat& col_cov,
                           const PenaltyParams& penalty) {
  const SymMat grad_row = ks_grad(st.row_spec, st.col_spec.eigenvalues);
  const SymMat grad_col = ks_grad(st.col_spec, st.row_spec.eigenvalues);
  const SymMat prox_row = shrink_nonneg_diag(st.row_sparse - st.mult_row, penalty.row_weight);
  const SymMat prox_col = shrink_nonneg_diag(st.col_sparse - st.mult_col, penalty.col_weight);

  KktResiduals out;
  out.r[0] = (row_cov - grad_row - st.mult_row).frob_norm() /
             (1.0 + grad_row.frob_norm() + row_cov.frob_norm() + st.mult_row.frob_norm());
  out.r[1] = (st.mult_dup - grad_col).frob_norm() /
             (1.0 + grad_col.frob_norm() + st.mult_dup.frob_norm());
  out.r[2] = (st.row_sparse - prox_row).frob_norm() /
             (1.0 + st.row_sparse.frob_norm() + prox_row.frob_norm());
  out.r[3] = (st.col_sparse - prox_col).frob_norm() /
             (1.0 + st.col_sparse.frob_norm() + prox_col.frob_norm());
  out.r[4] = (col_cov - st.mult_col - st.mult_dup).frob_norm() /
             (1.0 + col_cov.frob_norm() + st.mult_col.frob_norm() + st.mult_dup.frob_norm());
  out.r[5] = (st.row_prec - st.row_sparse).frob_norm() /
             (1.0 + st.row_prec.frob_norm() + st.row_sparse.frob_norm());
  out.r[6] = (st.col_dup - st.col_sparse).frob_norm() /
             (1.0 + st.col_dup.frob_norm() + st.col_sparse.frob_norm());
  out.r[7] = (st.col_dup - st.col_prec).frob_norm() /
             (1.0 + st.col_dup.frob_norm() + st.col_prec.frob_norm());
  out.max_residual = *std::max_element(out.r.begin(), out.r.end());
  return out;
}

double variant_kkt_error(const AdmmState& st, const SymMat& row_cov, const SymMat& col_cov,
                         const PenaltyParams& penalty) {
  const SymMat grad_row = ks_grad(st.row_spec, st.col_spec.eigenvalues);
  const SymMat grad_col = ks_grad(st.col_spec, st.row_spec.eigenvalues);
  const SymMat prox_row = shrink_nonneg_diag(st.row_sparse - st.mult_row, penalty.row_weight);
  const SymMat prox_col = shrink_nonneg_diag(st.col_sparse - st.mult_col, penalty.col_weight);

  const double v1 = (row_cov - grad_row - st.mult_row).frob_norm() /
                    (1.0 + grad_row.frob_norm() + row_cov.frob_norm() + st.mult_row.frob_norm());
  const double v2 = (col_cov - grad_col - st.mult_col).frob_norm() /
                    (1.0 + grad_col.frob_norm() + col_cov.frob_norm() + st.mult_col.frob_norm());
  const double v3 = (st.row_sparse - prox_row).frob_norm() /
                    (1.0 + st.row_sparse.frob_norm() + prox_row.frob_norm());
  const double v4 = (st.col_sparse - prox_col).frob_norm() /
                    (1.0 + st.col_sparse.frob_norm() + prox_col.frob_norm());
  const double v5 = (st.row_prec - st.row_sparse).frob_norm() /
                    (1.0 + st.row_prec.frob_norm() + st.row_sparse.frob_norm());
  const double v6 = (st.col_prec - st.col_sparse).frob_norm() /
                    (1.0 + st.col_prec.frob_norm() + st.col_sparse.frob_norm());
  return std::max({v1, v2, v3, v4, v5, v6});
}

Reconstruction reconstruct(const SymMat& row_prec, const SymMat& col_prec) {
  const SpectralDecomp rs = sym_eig(row_prec);
  const SpectralDecomp cs = sym_eig(col_prec);
  const double c = pd_shift(rs.eigenvalues, cs.eigenvalues);
  Reconstruction out{row_prec, col_prec, c};
  if (c != 0.0) {
    out.row_prec_hat += (-c) * SymMat::identity(row_prec.dim());
    out.col_prec_hat += c * SymMat::identity(col_prec.dim());
  }
  return out;
}

namespace {

/// Shared tail of solve()/solve_variant(): sparse copies, supports, the
/// PD-restoring shift from the cached spectra, and the final objective.
void finalize_report(SolveReport& report, const AdmmState& st, const SymMat& row_cov,
                     const SymMat& col_cov, const PenaltyParams& penalty) {
  report.row_sparse = st.row_sparse;
  report.col_sparse = st.col_sparse;
  report.support_row = support_of(st.row_sparse);
  report.support_col = support_of(st.col_sparse);
  report.row_prec_hat = st.row_prec;
  report.col_prec_hat = st.col_prec;
  report.shift_c = 0.0;
  try {
    const double c = pd_shift(st.row_spec.eigenvalues, st.col_spec.eigenvalues);
    if (c != 0.0) {
      report.row_prec_hat += (-c) * SymMat::identity(st.row_prec.dim());
      report.col_prec_hat += c * SymMat::identity(st.col_prec.dim());
    }
    report.shift_c = c;
  } catch (const std::domain_error&) {
    // Only reachable when the loop was aborted by a numerical failure; leave
    // the factors unshifted.
  }
  // The shift cancels inside every pairwise eigenvalue sum, so the cached
  // spectra still give the log-determinant of the reconstructed pair.
  const double logdet = ks_logdet(st.row_spec.eigenvalues, st.col_spec.eigenvalues);
  report.final_objective = penalized_value(logdet, report.row_prec_hat, report.col_prec_hat,
                                           row_cov, col_cov, penalty);
}

}  // namespace

SolveReport solve(const SymMat& row_cov, const SymMat& col_cov, const PenaltyParams& penalty,
                  const AdmmConfig& config, const AdmmState* initial, AdmmState* final_state) {
  check_penalty(penalty);
  check_config(config);
  {
    const ValidationResult v = validate_inputs(row_cov, col_cov);
    if (!v.ok) throw std::invalid_argument(v.message);
  }
  const int t = row_cov.dim();
  const int s = col_cov.dim();
  const auto start = std::chrono::steady_clock::now();

  AdmmState st = initial != nullptr ? *initial : make_initial_state(t, s);
  if (st.row_prec.dim() != t || st.col_prec.dim() != s) {
    throw std::invalid_argument("initial state dimension mismatch");
  }

  SolveReport report;
  AdmmConfig run = config;

  // Warm start: run the duplicate-free variant to low accuracy, then seed
  // the duplicate block so its consistency and split conditions start exact.
  if (initial == nullptr && config.warm_start) {
    try {
      for (int k = 1; k <= config.warm_max_iters; ++k) {
        variant_iterate(st, row_cov, col_cov, penalty, run);
        report.warm_iterations = k;
        if (variant_kkt_error(st, row_cov, col_cov, penalty) <= config.warm_tol) break;
      }
    } catch (const NumericalError&) {
      report.status = SolveStatus::numerical_failure;
      report.final_kkt = kInf;
      report.sigma_final = run.sigma;
      finalize_report(report, st, row_cov, col_cov, penalty);
      report.wall_seconds = elapsed_seconds(start);
      if (final_state != nullptr) *final_state = st;
      return report;
    }
    st.col_dup = st.col_prec;
    st.mult_dup = col_cov - st.mult_col;
  }

  int sigma_adjustments = 0;
  report.status = SolveStatus::iter_cap;
  report.final_kkt = kInf;
  try {
    for (int k = 1; k <= config.max_iters; ++k) {
      admm_iterate(st, row_cov, col_cov, penalty, run);
      const KktResiduals kkt = kkt_residuals(st, row_cov, col_cov, penalty);
      report.iterations = k;
      report.final_kkt = kkt.max_residual;
      const bool converged = kkt.max_residual <= config.tol;
      if (k % config.trace_every == 0 || converged || k == config.max_iters) {
        const double obj = penalized_value(
            ks_logdet(st.row_spec.eigenvalues, st.col_spec.eigenvalues), st.row_prec,
            st.col_prec, row_cov, col_cov, penalty);
        report.trace.push_back(TracePoint{k, elapsed_seconds(start), obj, kkt.max_residual});
      }
      if (converged) {
        report.status = SolveStatus::converged;
        break;
      }
      if (config.adaptive_sigma && k % 50 == 0 && sigma_adjustments < 20) {
        const double primal = std::max({kkt.r[5], kkt.r[6], kkt.r[7]});
        const double dual = std::max(kkt.r[0], kkt.r[1]);
        if (primal > 10.0 * dual) {
          run.sigma *= 2.0;
          ++sigma_adjustments;
        } else if (dual > 10.0 * primal) {
          run.sigma *= 0.5;
          ++sigma_adjustments;
        }
      }
    }
  } catch (const NumericalError&) {
    report.status = SolveStatus::numerical_failure;
  }

  report.sigma_final = run.sigma;
  finalize_report(report, st, row_cov, col_cov, penalty);
  report.wall_seconds = elapsed_seconds(start);
  if (final_state != nullptr) *final_state = st;
  return report;
}

SolveReport solve_variant(const SymMat& row_cov, const SymMat& col_cov,
                          const PenaltyParams& penalty, const AdmmConfig& config) {
  check_penalty(penalty);
  check_config(config);
  {
    const ValidationResult v = validate_inputs(row_cov, col_cov);
    if (!v.ok) throw std::invalid_argument(v.message);
  }
  const auto start = std::chrono::steady_clock::now();

  AdmmState st = make_initial_state(row_cov.dim(), col_cov.dim());
  SolveReport report;
  report.status = SolveStatus::iter_cap;
  report.final_kkt = kInf;
  try {
    for (int k = 1; k <= config.max_iters; ++k) {
      variant_iterate(st, row_cov, col_cov, penalty, config);
      const double err = variant_kkt_error(st, row_cov, col_cov, penalty);
      report.iterations = k;
      report.final_kkt = err;
      const bool converged = err <= config.tol;
      if (k % config.trace_every == 0 || converged || k == config.max_iters) {
        const double obj = penalized_value(
            ks_logdet(st.row_spec.eigenvalues, st.col_spec.eigenvalues), st.row_prec,
            st.col_prec, row_cov, col_cov, penalty);
        report.trace.push_back(TracePoint{k, elapsed_seconds(start), obj, err});
      }
      if (converged) {
        report.status = SolveStatus::converged;
        break;
      }
    }
  } catch (const NumericalError&) {
    report.status = SolveStatus::numerical_failure;
  }

  report.sigma_final = config.sigma;
  finalize_report(report, st, row_cov, col_cov, penalty);
  report.wall_seconds = elapsed_seconds(start);
  return report;
}

}  // namespace ksglasso
