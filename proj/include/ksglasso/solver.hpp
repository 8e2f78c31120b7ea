#pragma once

#include <array>
#include <string>
#include <vector>

#include "ksglasso/prox.hpp"
#include "ksglasso/symmat.hpp"

namespace ksglasso {

// Jointly estimates a t x t row-wise precision factor G and an s x s
// column-wise precision factor O from the row/column sample covariances R, W
// by minimizing
//
//   -logdet KS(G, O) + <O, W> + <G, R> + l0*s ||G||_1,off + l0*t ||O||_1,off
//
// over pairs whose Kronecker sum is PD and whose diagonals are nonnegative.
// The nonnegativity constraints pin down the otherwise unidentifiable
// diagonal split KS(G, O) = KS(G - c I, O + c I); a final shift restores a
// pair in which both factors are individually PD.
//
// The solver is an ADMM on the split G = Gs (sparse copy), E = Os, E = O,
// where E duplicates the column factor so the <., W> term and the log-det
// term separate into the two ADMM blocks. A cheaper warm-start variant drops
// the duplicate E.

/// Off-diagonal l1 weights: row_weight = lambda0 * s multiplies the row
/// factor's penalty, col_weight = lambda0 * t the column factor's.
struct PenaltyParams {
  double lambda0 = 0.0;
  double row_weight = 0.0;
  double col_weight = 0.0;

  static PenaltyParams from_lambda0(double lambda0, int t, int s);
};

struct AdmmConfig {
  double sigma = 1.0;          // augmented Lagrangian parameter
  double tau = 1.618;          // dual step length, in (0, 1.618]
  double tol = 1e-6;           // relative KKT tolerance
  int max_iters = 20000;
  bool warm_start = true;      // run the duplicate-free variant first
  double warm_tol = 1e-4;
  int warm_max_iters = 2000;
  PsiSolveParams psi{};
  int trace_every = 1;
  // Residual balancing: double/halve sigma when the primal/dual residual
  // ratio exceeds 10, checked every 50 iterations, at most 20 adjustments.
  // Off by default; the plain-ADMM convergence guarantee covers only
  // constant sigma.
  bool adaptive_sigma = false;
};

/// Full primal/dual iterate. row_spec/col_spec cache the factor
/// decompositions produced by the proximal steps, so one iteration costs
/// exactly two dense eigendecompositions.
struct AdmmState {
  SymMat row_prec;    // G,  t x t
  SymMat col_prec;    // O,  s x s
  SymMat row_sparse;  // sparse copy of G (exact zeros from shrinkage)
  SymMat col_sparse;  // sparse copy of O
  SymMat col_dup;     // duplicate of O carrying the <., W> term
  SymMat mult_row;    // multiplier of G - row_sparse = 0
  SymMat mult_col;    // multiplier of col_dup - col_sparse = 0
  SymMat mult_dup;    // multiplier of col_dup - O = 0
  SpectralDecomp row_spec;
  SpectralDecomp col_spec;
};

/// Identity primal blocks, zero multipliers; spectra built without an
/// eigensolver call.
AdmmState make_initial_state(int t, int s);

/// The eight relative KKT residuals of the split formulation, in the order:
/// row stationarity, column stationarity, the two shrinkage fixed points,
/// the multiplier split of W, and the three coupling residuals.
struct KktResiduals {
  std::array<double, 8> r{};
  double max_residual = 0.0;
};

struct ValidationResult {
  bool ok = true;
  std::string message;
};

enum class SolveStatus { converged, iter_cap, numerical_failure };

struct TracePoint {
  int iter = 0;
  double seconds = 0.0;
  double objective = 0.0;
  double kkt = 0.0;
};

struct SolveReport {
  SymMat row_prec_hat;  // PD when status == converged
  SymMat col_prec_hat;
  SymMat row_sparse;    // final shrinkage copies; the exactly sparse output
  SymMat col_sparse;
  SupportMask support_row;
  SupportMask support_col;
  double shift_c = 0.0;
  int iterations = 0;       // main-loop iterations
  int warm_iterations = 0;  // variant iterations spent on the warm start
  std::vector<TracePoint> trace;
  SolveStatus status = SolveStatus::iter_cap;
  double final_objective = 0.0;
  double final_kkt = 0.0;
  double sigma_final = 0.0;
  double wall_seconds = 0.0;  // measured from solve entry, warm start included
};

/// Penalized negative log-likelihood objective. +inf when the Kronecker sum
/// is not PD or some diagonal entry of either factor is negative.
double objective(const SymMat& row_prec, const SymMat& col_prec, const SymMat& row_cov,
                 const SymMat& col_cov, const PenaltyParams& penalty);

/// Checks that both sample covariances have strictly positive diagonals.
/// A zero diagonal means a row (or column) of every observation is
/// identically zero; the message names the index and the fix.
ValidationResult validate_inputs(const SymMat& row_cov, const SymMat& col_cov);

/// One full ADMM iteration (both primal blocks, then the multipliers) on the
/// duplicate-split formulation. Exactly two sym_eig calls.
void admm_iterate(AdmmState& state, const SymMat& row_cov, const SymMat& col_cov,
                  const PenaltyParams& penalty, const AdmmConfig& config);

/// One iteration of the duplicate-free variant used for warm starts. Leaves
/// col_dup and mult_dup untouched. Exactly two sym_eig calls.
void variant_iterate(AdmmState& state, const SymMat& row_cov, const SymMat& col_cov,
                     const PenaltyParams& penalty, const AdmmConfig& config);

/// Relative KKT residuals of the full formulation at the current iterate.
/// Uses the cached spectra; no eigendecompositions.
KktResiduals kkt_residuals(const AdmmState& state, const SymMat& row_cov,
                           const SymMat& col_cov, const PenaltyParams& penalty);

/// Maximum relative KKT residual of the duplicate-free variant's optimality
/// system (its six conditions mirror the full set minus the duplicate).
double variant_kkt_error(const AdmmState& state, const SymMat& row_cov,
                         const SymMat& col_cov, const PenaltyParams& penalty);

/// Shifts (G, O) -> (G - c I, O + c I), c = (min_eig(G) - min_eig(O))/2, when
/// either factor fails strict PD; the Kronecker sum is unchanged and both
/// shifted factors are PD. Throws std::domain_error when the sum is not PD.
struct Reconstruction {
  SymMat row_prec_hat;
  SymMat col_prec_hat;
  double shift_c = 0.0;
};

Reconstruction reconstruct(const SymMat& row_prec, const SymMat& col_prec);

/// Full solve: optional variant warm start, main ADMM loop to the KKT
/// tolerance, final PD-restoring shift. Iteration caps and inner numerical
/// failures come back in the report status, not as exceptions; only invalid
/// inputs throw. When `initial` is given the warm-start phase is skipped and
/// the main loop starts from it (used for continuation along a lambda path).
SolveReport solve(const SymMat& row_cov, const SymMat& col_cov, const PenaltyParams& penalty,
                  const AdmmConfig& config, const AdmmState* initial = nullptr,
                  AdmmState* final_state = nullptr);

/// Runs the duplicate-free variant as a standalone solver (same stopping
/// logic against its own KKT system). Mostly of interest for comparing the
/// two algorithms; solve() already uses it internally for warm starts.
SolveReport solve_variant(const SymMat& row_cov, const SymMat& col_cov,
                          const PenaltyParams& penalty, const AdmmConfig& config);

}  // namespace ksglasso
