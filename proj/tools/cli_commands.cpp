#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"
#include "ksglasso/datagen.hpp"
#include "ksglasso/io.hpp"
#include "ksglasso/kronsum.hpp"
#include "ksglasso/metrics.hpp"
#include "ksglasso/solver.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace ksglasso::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iter_cap: return "iter_cap";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

AdmmConfig to_config(const SolverFlags& f) {
  AdmmConfig c;
  c.tol = f.tol;
  c.sigma = f.sigma;
  c.tau = f.tau;
  c.max_iters = f.max_iters;
  c.warm_start = f.warm_start;
  c.trace_every = f.trace_every;
  return c;
}

/// Scalar JSON value rendered for the key=value twin file.
std::string kv_scalar(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_null()) return "null";
  return v.dump();
}

/// Writes <stem>.txt (key=value) and <stem>.json from one flat record.
void write_record(const fs::path& stem, const ordered_json& record) {
  KvRecord kv;
  for (const auto& [key, value] : record.items()) kv.emplace_back(key, kv_scalar(value));
  fs::path txt = stem;
  txt += ".txt";
  fs::path json = stem;
  json += ".json";
  write_kv(txt, kv);
  write_text(json, record.dump(2) + "\n");
}

struct Inputs {
  SymMat row_cov;
  SymMat col_cov;
};

Inputs load_covariances(const std::string& data_dir, const std::string& row_path,
                        const std::string& col_path) {
  if (!data_dir.empty()) {
    if (!row_path.empty() || !col_path.empty()) {
      throw std::invalid_argument(
          "pass either --data or explicit --row-cov/--col-cov files, not both");
    }
    const fs::path dir(data_dir);
    const fs::path rc = dir / "row_cov.txt";
    const fs::path cc = dir / "col_cov.txt";
    if (fs::exists(rc) && fs::exists(cc)) return Inputs{read_sym(rc), read_sym(cc)};
    const fs::path op = dir / "observations.txt";
    if (fs::exists(op)) {
      CovariancePair cov = covariances(read_observations(op));
      return Inputs{std::move(cov.row_cov), std::move(cov.col_cov)};
    }
    throw std::invalid_argument(data_dir +
                                ": expected row_cov.txt and col_cov.txt, or observations.txt");
  }
  if (row_path.empty() || col_path.empty()) {
    throw std::invalid_argument("need --data DIR, or both --row-cov and --col-cov");
  }
  return Inputs{read_sym(row_path), read_sym(col_path)};
}

/// Observation count from the file header without reading the blocks.
int peek_observation_count(const fs::path& path) {
  std::ifstream in(path);
  long long n = 0, t = 0, s = 0;
  if (in >> n >> t >> s && n >= 1 && n <= std::numeric_limits<int>::max()) {
    return static_cast<int>(n);
  }
  return 0;
}

ordered_json summary_record(const SolveReport& rep, double lambda0, const PenaltyParams& pen,
                            const AdmmConfig& cfg, int t, int s) {
  ordered_json j;
  j["command"] = "solve";
  j["t"] = t;
  j["s"] = s;
  j["lambda0"] = lambda0;
  j["rowWeight"] = pen.row_weight;
  j["colWeight"] = pen.col_weight;
  j["sigma"] = cfg.sigma;
  j["sigmaFinal"] = rep.sigma_final;
  j["tau"] = cfg.tau;
  j["tol"] = cfg.tol;
  j["maxIters"] = cfg.max_iters;
  j["warmStart"] = cfg.warm_start;
  j["warmTol"] = cfg.warm_tol;
  j["warmMaxIters"] = cfg.warm_max_iters;
  j["traceEvery"] = cfg.trace_every;
  j["status"] = status_name(rep.status);
  j["iterations"] = rep.iterations;
  j["warmIterations"] = rep.warm_iterations;
  j["shiftC"] = rep.shift_c;
  j["finalObjective"] = rep.final_objective;
  j["finalKkt"] = rep.final_kkt;
  j["wallSeconds"] = rep.wall_seconds;
  return j;
}

void write_solve_outputs(const fs::path& dir, const SolveReport& rep, const ordered_json& summary) {
  fs::create_directories(dir);
  write_sym(dir / "estimate_row.txt", rep.row_prec_hat);
  write_sym(dir / "estimate_col.txt", rep.col_prec_hat);
  write_support(dir / "support_row.txt", rep.support_row);
  write_support(dir / "support_col.txt", rep.support_col);
  std::string tr = "# iter seconds objective kkt\n";
  for (const TracePoint& p : rep.trace) {
    tr += std::to_string(p.iter);
    tr += ' ';
    tr += format_double(p.seconds);
    tr += ' ';
    tr += format_double(p.objective);
    tr += ' ';
    tr += format_double(p.kkt);
    tr += '\n';
  }
  write_text(dir / "trace.txt", tr);
  write_record(dir / "summary", summary);
}

double mask_sparsity(const SupportMask& row, const SupportMask& col) {
  long count = 0;
  for (int i = 0; i < row.dim; ++i) {
    for (int j = 0; j < row.dim; ++j) count += i != j && row(i, j);
  }
  for (int i = 0; i < col.dim; ++i) {
    for (int j = 0; j < col.dim; ++j) count += i != j && col(i, j);
  }
  const double slots = static_cast<double>(row.dim) * (row.dim - 1) +
                       static_cast<double>(col.dim) * (col.dim - 1);
  return slots == 0.0 ? 0.0 : static_cast<double>(count) / slots;
}

}  // namespace

std::vector<double> default_grid() {
  std::vector<double> grid;
  grid.reserve(41);
  for (int k = 0; k <= 40; ++k) grid.push_back(std::pow(10.0, -4.0 + 0.1 * k));
  return grid;
}

int cmd_generate(const GenerateArgs& a, std::ostream& log, std::ostream& err) {
  try {
    if (a.type != 1 && a.type != 2) throw std::invalid_argument("--type must be 1 or 2");
    if (a.t < 2 || a.s < 2) throw std::invalid_argument("--t and --s must be at least 2");
    if (a.n < 0) throw std::invalid_argument("--n must be positive");
    if (a.out.empty()) throw std::invalid_argument("--out is required");
    const long long auto_n = (static_cast<long long>(a.t) * a.s + 9999) / 10000;
    const int n = a.n > 0 ? a.n : static_cast<int>(std::max<long long>(1, auto_n));

    const std::uint64_t row_seed = splitmix64(a.seed);
    const std::uint64_t col_seed = splitmix64(row_seed);
    const std::uint64_t obs_seed = splitmix64(col_seed);
    SymMat row = a.type == 1 ? gen_type1(a.t, row_seed) : gen_type2(a.t, row_seed);
    SymMat col = a.type == 1 ? gen_type1(a.s, col_seed) : gen_type2(a.s, col_seed);
    const GroundTruth truth = GroundTruth::from_factors(std::move(row), std::move(col));
    const ObservationSet obs = sample_ks_gaussian(truth, n, obs_seed);
    const CovariancePair cov = covariances(obs);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_sym(dir / "truth_row.txt", truth.row_prec);
    write_sym(dir / "truth_col.txt", truth.col_prec);
    write_observations(dir / "observations.txt", obs);
    write_sym(dir / "row_cov.txt", cov.row_cov);
    write_sym(dir / "col_cov.txt", cov.col_cov);

    const long row_nnz = offdiag_l0(truth.row_prec);
    const long col_nnz = offdiag_l0(truth.col_prec);
    ordered_json meta;
    meta["command"] = "generate";
    meta["type"] = a.type;
    meta["t"] = a.t;
    meta["s"] = a.s;
    meta["n"] = n;
    meta["seed"] = a.seed;
    meta["rowNnzOff"] = row_nnz;
    meta["colNnzOff"] = col_nnz;
    write_record(dir / "meta", meta);
    log << "wrote " << dir.string() << ": type=" << a.type << " t=" << a.t << " s=" << a.s
        << " n=" << n << " rowNnzOff=" << row_nnz << " colNnzOff=" << col_nnz << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_solve(const SolveArgs& a, std::ostream& log, std::ostream& err) {
  try {
    if (a.out.empty()) throw std::invalid_argument("--out is required");
    if (!(a.lambda0 > 0.0)) throw std::invalid_argument("--lambda0 must be positive");
    const Inputs in = load_covariances(a.data_dir, a.row_cov_path, a.col_cov_path);
    const int t = in.row_cov.dim();
    const int s = in.col_cov.dim();
    const PenaltyParams pen = PenaltyParams::from_lambda0(a.lambda0, t, s);
    const AdmmConfig cfg = to_config(a.flags);
    const SolveReport rep = solve(in.row_cov, in.col_cov, pen, cfg);
    write_solve_outputs(fs::path(a.out), rep, summary_record(rep, a.lambda0, pen, cfg, t, s));
    log << "status=" << status_name(rep.status) << " iterations=" << rep.iterations
        << " warmIterations=" << rep.warm_iterations
        << " objective=" << format_double(rep.final_objective)
        << " kkt=" << format_double(rep.final_kkt) << "\n";
    return rep.status == SolveStatus::converged ? kExitOk : kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

namespace {

struct PointOutcome {
  SolveReport report;
  double lambda0 = 0.0;
  double bic_value = kNan;
  double sparsity = kNan;
  double rel_error = kNan;
  double f_row = kNan;
  double f_col = kNan;
  double f_avg = kNan;
};

}  // namespace

int cmd_sweep(const SweepArgs& a, std::ostream& log, std::ostream& err) {
  try {
    if (a.out.empty()) throw std::invalid_argument("--out is required");
    if (a.criterion != "bic" && a.criterion != "fscore") {
      throw std::invalid_argument("--criterion must be bic or fscore");
    }
    if (a.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
    const Inputs in = load_covariances(a.data_dir, a.row_cov_path, a.col_cov_path);
    const int t = in.row_cov.dim();
    const int s = in.col_cov.dim();

    const std::vector<double> grid = a.grid.empty() ? default_grid() : a.grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
        throw std::invalid_argument("--grid must be strictly increasing and positive");
      }
    }

    const bool truth_files = !a.truth_row_path.empty() || !a.truth_col_path.empty();
    if (truth_files && (a.truth_row_path.empty() || a.truth_col_path.empty())) {
      throw std::invalid_argument("--truth-row and --truth-col must be given together");
    }
    if (!a.truth_dir.empty() && truth_files) {
      throw std::invalid_argument("pass either --truth or --truth-row/--truth-col, not both");
    }
    std::optional<GroundTruth> truth;
    if (!a.truth_dir.empty()) {
      const fs::path dir(a.truth_dir);
      truth = GroundTruth::from_factors(read_sym(dir / "truth_row.txt"),
                                        read_sym(dir / "truth_col.txt"));
    } else if (truth_files) {
      truth = GroundTruth::from_factors(read_sym(a.truth_row_path), read_sym(a.truth_col_path));
    }
    if (truth && (truth->row_prec.dim() != t || truth->col_prec.dim() != s)) {
      throw std::invalid_argument("ground-truth dimensions do not match the covariances");
    }
    if (a.criterion == "fscore" && !truth) {
      throw std::invalid_argument("criterion fscore needs a ground truth (--truth DIR)");
    }

    int n = a.n;
    if (n <= 0 && !a.data_dir.empty()) {
      n = peek_observation_count(fs::path(a.data_dir) / "observations.txt");
    }
    if (n <= 0) {
      throw std::invalid_argument(
          "observation count unavailable: pass --n or a --data directory with observations.txt");
    }

    const fs::path out_dir(a.out);
    fs::create_directories(out_dir);
    const AdmmConfig base = to_config(a.flags);
    const int g = static_cast<int>(grid.size());
    std::vector<PointOutcome> points(static_cast<std::size_t>(g));

    // Contiguous chunks per worker; continuation chains only inside a chunk,
    // so the result set is independent of the worker count.
    const auto run_range = [&](int lo, int hi) {
      std::optional<AdmmState> carry;
      for (int i = lo; i < hi; ++i) {
        const PenaltyParams pen = PenaltyParams::from_lambda0(grid[i], t, s);
        AdmmState state;
        const bool chained = !a.cold && carry.has_value();
        SolveReport rep = solve(in.row_cov, in.col_cov, pen, base,
                                chained ? &*carry : nullptr, a.cold ? nullptr : &state);
        if (!a.cold) carry = std::move(state);

        PointOutcome& po = points[static_cast<std::size_t>(i)];
        po.lambda0 = grid[i];
        po.bic_value = bic(rep.row_prec_hat, rep.col_prec_hat, rep.row_sparse, rep.col_sparse,
                           in.row_cov, in.col_cov, n);
        po.sparsity = sparsity_level(rep.row_sparse, rep.col_sparse);
        if (truth) {
          po.rel_error = relative_error(rep.row_prec_hat, rep.col_prec_hat, truth->row_prec,
                                        truth->col_prec);
          po.f_row = fscore(rep.support_row, truth->support_row);
          po.f_col = fscore(rep.support_col, truth->support_col);
          po.f_avg = 0.5 * (po.f_row + po.f_col);
        }
        char name[24];
        std::snprintf(name, sizeof(name), "point_%02d", i);
        ordered_json summary = summary_record(rep, grid[i], pen, base, t, s);
        summary["gridIndex"] = i;
        summary["chained"] = chained;
        write_solve_outputs(out_dir / name, rep, summary);
        po.report = std::move(rep);
      }
    };

    const int jobs = std::min(a.jobs, g);
    if (jobs <= 1) {
      run_range(0, g);
    } else {
      const int chunk = (g + jobs - 1) / jobs;
      std::vector<std::thread> workers;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
      for (int w = 0; w < jobs; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(g, lo + chunk);
        workers.emplace_back([&, w, lo, hi] {
          try {
            run_range(lo, hi);
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
      for (std::thread& th : workers) th.join();
      for (const std::exception_ptr& ep : errors) {
        if (ep) std::rethrow_exception(ep);
      }
    }

    // Selection over converged points only: lowest bic / highest fscoreAvg,
    // first index on ties.
    int selected = -1;
    for (int i = 0; i < g; ++i) {
      const PointOutcome& po = points[static_cast<std::size_t>(i)];
      if (po.report.status != SolveStatus::converged) continue;
      if (selected < 0) {
        selected = i;
        continue;
      }
      const PointOutcome& best = points[static_cast<std::size_t>(selected)];
      if (a.criterion == "bic" ? po.bic_value < best.bic_value : po.f_avg > best.f_avg) {
        selected = i;
      }
    }

    bool all_converged = true;
    std::string table;
    ordered_json sweep;
    sweep["command"] = "sweep";
    sweep["t"] = t;
    sweep["s"] = s;
    sweep["n"] = n;
    sweep["criterion"] = a.criterion;
    sweep["cold"] = a.cold;
    sweep["jobs"] = a.jobs;
    sweep["grid"] = grid;
    sweep["points"] = ordered_json::array();
    for (int i = 0; i < g; ++i) {
      const PointOutcome& po = points[static_cast<std::size_t>(i)];
      all_converged = all_converged && po.report.status == SolveStatus::converged;
      table += format_double(po.lambda0);
      table += ' ';
      table += format_double(po.report.final_objective);
      table += ' ';
      table += format_double(po.bic_value);
      table += ' ';
      table += format_double(po.sparsity);
      if (truth) {
        table += ' ';
        table += format_double(po.rel_error);
        table += ' ';
        table += format_double(po.f_avg);
      }
      table += '\n';
      ordered_json row;
      row["gridIndex"] = i;
      row["lambda0"] = po.lambda0;
      row["status"] = status_name(po.report.status);
      row["iterations"] = po.report.iterations;
      row["warmIterations"] = po.report.warm_iterations;
      row["objective"] = po.report.final_objective;
      row["kkt"] = po.report.final_kkt;
      row["bic"] = po.bic_value;
      row["sparsityLevel"] = po.sparsity;
      if (truth) {
        row["relError"] = po.rel_error;
        row["fscoreRow"] = po.f_row;
        row["fscoreCol"] = po.f_col;
        row["fscoreAvg"] = po.f_avg;
      }
      sweep["points"].push_back(std::move(row));
      log << "lambda0=" << format_double(po.lambda0)
          << " status=" << status_name(po.report.status)
          << " iterations=" << po.report.iterations << " bic=" << format_double(po.bic_value)
          << " sparsity=" << format_double(po.sparsity);
      if (truth) log << " fscoreAvg=" << format_double(po.f_avg);
      log << "\n";
    }
    if (selected >= 0) {
      sweep["selectedIndex"] = selected;
      sweep["selectedLambda0"] = grid[static_cast<std::size_t>(selected)];
      table += "# selected index=" + std::to_string(selected) +
               " lambda0=" + format_double(grid[static_cast<std::size_t>(selected)]) +
               " criterion=" + a.criterion + "\n";
      log << "selected index=" << selected
          << " lambda0=" << format_double(grid[static_cast<std::size_t>(selected)])
          << " criterion=" << a.criterion << "\n";
    } else {
      sweep["selectedIndex"] = nullptr;
      sweep["selectedLambda0"] = nullptr;
      table += "# selected none\n";
      log << "selected none (no grid point converged)\n";
    }
    write_text(out_dir / "sweep.txt", table);
    write_text(out_dir / "sweep.json", sweep.dump(2) + "\n");

    if (selected < 0) return kExitNotConverged;
    return all_converged ? kExitOk : kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& log, std::ostream& err) {
  try {
    if (a.out.empty()) throw std::invalid_argument("--out is required");
    const bool est_files = !a.est_row_path.empty() || !a.est_col_path.empty();
    if (a.est_dir.empty() == !est_files) {
      throw std::invalid_argument("pass either --est DIR or both --est-row and --est-col");
    }
    if (est_files && (a.est_row_path.empty() || a.est_col_path.empty())) {
      throw std::invalid_argument("--est-row and --est-col must be given together");
    }
    SymMat est_row, est_col;
    SupportMask mask_row, mask_col;
    if (!a.est_dir.empty()) {
      const fs::path dir(a.est_dir);
      est_row = read_sym(dir / "estimate_row.txt");
      est_col = read_sym(dir / "estimate_col.txt");
      // Solve outputs carry the exact supports of the sparse copies; fall
      // back to the estimates' nonzeros when evaluating bare matrices.
      mask_row = fs::exists(dir / "support_row.txt") ? read_support(dir / "support_row.txt")
                                                     : support_of(est_row);
      mask_col = fs::exists(dir / "support_col.txt") ? read_support(dir / "support_col.txt")
                                                     : support_of(est_col);
    } else {
      est_row = read_sym(a.est_row_path);
      est_col = read_sym(a.est_col_path);
      mask_row = support_of(est_row);
      mask_col = support_of(est_col);
    }

    const bool truth_files = !a.truth_row_path.empty() || !a.truth_col_path.empty();
    if (a.truth_dir.empty() == !truth_files) {
      throw std::invalid_argument("pass either --truth DIR or both --truth-row and --truth-col");
    }
    if (truth_files && (a.truth_row_path.empty() || a.truth_col_path.empty())) {
      throw std::invalid_argument("--truth-row and --truth-col must be given together");
    }
    SymMat truth_row, truth_col;
    if (!a.truth_dir.empty()) {
      const fs::path dir(a.truth_dir);
      truth_row = read_sym(dir / "truth_row.txt");
      truth_col = read_sym(dir / "truth_col.txt");
    } else {
      truth_row = read_sym(a.truth_row_path);
      truth_col = read_sym(a.truth_col_path);
    }

    const double rel = relative_error(est_row, est_col, truth_row, truth_col);
    const double f_row = fscore(mask_row, support_of(truth_row));
    const double f_col = fscore(mask_col, support_of(truth_col));
    const double f_avg = 0.5 * (f_row + f_col);
    const double sparsity = mask_sparsity(mask_row, mask_col);

    ordered_json m;
    m["command"] = "eval";
    m["relError"] = rel;
    m["fscoreRow"] = f_row;
    m["fscoreCol"] = f_col;
    m["fscoreAvg"] = f_avg;
    m["sparsityLevel"] = sparsity;
    fs::create_directories(fs::path(a.out));
    write_record(fs::path(a.out) / "metrics", m);
    log << "relError=" << format_double(rel) << " fscoreRow=" << format_double(f_row)
        << " fscoreCol=" << format_double(f_col) << " fscoreAvg=" << format_double(f_avg)
        << " sparsityLevel=" << format_double(sparsity) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ksglasso::cli
