#include <iostream>

#include "CLI11.hpp"
#include "cli_commands.hpp"

namespace {

void add_solver_flags(CLI::App* cmd, ksglasso::cli::SolverFlags& f) {
  cmd->add_option("--tol", f.tol, "Relative KKT stopping tolerance");
  cmd->add_option("--sigma", f.sigma, "Augmented Lagrangian parameter");
  cmd->add_option("--tau", f.tau, "Dual step length in (0, 1.618]");
  cmd->add_option("--max-iters", f.max_iters, "Iteration cap");
  cmd->add_flag_callback(
      "--no-warm-start", [&f] { f.warm_start = false; }, "Skip the warm-start phase");
  cmd->add_option("--trace-every", f.trace_every, "Record every k-th trace row");
}

void add_input_flags(CLI::App* cmd, std::string& data_dir, std::string& row_cov,
                     std::string& col_cov) {
  cmd->add_option("--data", data_dir,
                  "Dataset directory (row_cov.txt/col_cov.txt, or observations.txt)");
  cmd->add_option("--row-cov", row_cov, "Row covariance matrix file");
  cmd->add_option("--col-cov", col_cov, "Column covariance matrix file");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ksglasso::cli;
  CLI::App app{
      "Joint estimation of sparse row and column precision factors for "
      "matrix-variate data under a Kronecker-sum model"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "Generate a synthetic dataset");
  g->add_option("--type", gen.type, "Graph type: 1 random sparse, 2 ten-block diagonal")
      ->check(CLI::IsMember({1, 2}));
  g->add_option("--t", gen.t, "Row dimension")->required();
  g->add_option("--s", gen.s, "Column dimension")->required();
  g->add_option("--n", gen.n, "Observations (default: t*s/10000 rounded up, at least 1)");
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_option("--out", gen.out, "Output directory")->required();

  SolveArgs sol;
  CLI::App* so = app.add_subcommand("solve", "Solve at one penalty level");
  add_input_flags(so, sol.data_dir, sol.row_cov_path, sol.col_cov_path);
  so->add_option("--lambda0", sol.lambda0, "Base penalty level (> 0)")->required();
  so->add_option("--out", sol.out, "Output directory")->required();
  add_solver_flags(so, sol.flags);

  SweepArgs sw;
  CLI::App* swc = app.add_subcommand("sweep", "Solve along a penalty grid and select a model");
  add_input_flags(swc, sw.data_dir, sw.row_cov_path, sw.col_cov_path);
  swc->add_option("--grid", sw.grid, "Comma-separated penalty grid (default 10^-4..10^0)")
      ->delimiter(',');
  swc->add_option("--criterion", sw.criterion, "Selection criterion")
      ->check(CLI::IsMember({"bic", "fscore"}));
  swc->add_option("--truth", sw.truth_dir, "Dataset directory with truth_row.txt/truth_col.txt");
  swc->add_option("--truth-row", sw.truth_row_path, "Ground-truth row factor file");
  swc->add_option("--truth-col", sw.truth_col_path, "Ground-truth column factor file");
  swc->add_option("--n", sw.n, "Observation count (for bic; default: from the data directory)");
  swc->add_flag("--cold", sw.cold, "Solve every grid point from scratch (no continuation)");
  swc->add_option("--jobs", sw.jobs, "Worker threads over grid chunks");
  swc->add_option("--out", sw.out, "Output directory")->required();
  add_solver_flags(swc, sw.flags);

  EvalArgs ev;
  CLI::App* evc = app.add_subcommand("eval", "Score estimates against a ground truth");
  evc->add_option("--est", ev.est_dir, "Solve output directory");
  evc->add_option("--est-row", ev.est_row_path, "Estimated row factor file");
  evc->add_option("--est-col", ev.est_col_path, "Estimated column factor file");
  evc->add_option("--truth", ev.truth_dir, "Dataset directory with truth_row.txt/truth_col.txt");
  evc->add_option("--truth-row", ev.truth_row_path, "Ground-truth row factor file");
  evc->add_option("--truth-col", ev.truth_col_path, "Ground-truth column factor file");
  evc->add_option("--out", ev.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (g->parsed()) return cmd_generate(gen, std::cout, std::cerr);
  if (so->parsed()) return cmd_solve(sol, std::cout, std::cerr);
  if (swc->parsed()) return cmd_sweep(sw, std::cout, std::cerr);
  if (evc->parsed()) return cmd_eval(ev, std::cout, std::cerr);
  return kExitUsage;
}
