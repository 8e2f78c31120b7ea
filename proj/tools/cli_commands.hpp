#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ksglasso::cli {

constexpr int kExitOk = 0;            // finished and (where applicable) converged
constexpr int kExitNotConverged = 1;  // iteration cap or numerical failure
constexpr int kExitUsage = 2;         // bad flags, unreadable/invalid inputs

struct SolverFlags {
  double tol = 1e-6;
  double sigma = 1.0;
  double tau = 1.618;
  int max_iters = 20000;
  bool warm_start = true;
  int trace_every = 1;
};

struct GenerateArgs {
  int type = 2;
  int t = 0;
  int s = 0;
  int n = 0;  // 0: use ceil(t*s/10000), at least 1
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveArgs {
  std::string data_dir;      // dataset directory, or:
  std::string row_cov_path;  // explicit covariance files (need both)
  std::string col_cov_path;
  double lambda0 = -1.0;
  SolverFlags flags;
  std::string out;
};

struct SweepArgs {
  std::string data_dir;
  std::string row_cov_path;
  std::string col_cov_path;
  std::vector<double> grid;       // empty: default_grid()
  std::string criterion = "bic";  // bic | fscore
  std::string truth_dir;
  std::string truth_row_path;
  std::string truth_col_path;
  int n = 0;  // observation count for the bic column; 0: read from data dir
  bool cold = false;  // solve every grid point from scratch (no continuation)
  int jobs = 1;
  SolverFlags flags;
  std::string out;
};

struct EvalArgs {
  std::string est_dir;  // solve output directory, or explicit files:
  std::string est_row_path;
  std::string est_col_path;
  std::string truth_dir;  // dataset directory, or explicit files:
  std::string truth_row_path;
  std::string truth_col_path;
  std::string out;
};

/// 10^-4, 10^-3.9, ..., 10^0 (41 points).
std::vector<double> default_grid();

// Each command returns a process exit code, prints human-readable progress on
// `log` and errors on `err`. All data goes to files under the --out directory.
int cmd_generate(const GenerateArgs& args, std::ostream& log, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& log, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& log, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& log, std::ostream& err);

}  // namespace ksglasso::cli
