// Experiment harness: generate EDM completion instances, run the penalized
// complementarity solver (PALM / Fast PALM) or the trace-minimization
// baseline, and emit per-iteration traces and comparison tables as CSV.

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rankmin/errors.hpp"
#include "rankmin/instances.hpp"
#include "rankmin/palm.hpp"
#include "rankmin/rng.hpp"
#include "rankmin/trace_baseline.hpp"
#include "rankmin/trace_io.hpp"

namespace fs = std::filesystem;
using namespace rankmin;

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitNonConvergence = 3;

enum class LogLevel { Off = 0, Summary = 1, Trace = 2 };

LogLevel log_level() {
  const char* env = std::getenv("SDCMPCC_LOG");
  if (!env) return LogLevel::Summary;
  const std::string v = env;
  if (v == "off") return LogLevel::Off;
  if (v == "trace") return LogLevel::Trace;
  return LogLevel::Summary;
}

struct SolverOptions {
  PalmConfig palm;
  double mu = 1e-2;
  double rho_max = 0.0;
  double rho_factor = 0.0;

  PalmConfig config(bool momentum) const {
    PalmConfig c = palm;
    c.momentum = momentum || palm.momentum;
    if (rho_factor > 1.0)
      c.continuation = Continuation{rho_max > 0 ? rho_max : 1e4, rho_factor};
    return c;
  }
};

void add_solver_flags(CLI::App* cmd, SolverOptions& opts) {
  cmd->add_option("--rho", opts.palm.rho, "penalty parameter");
  cmd->add_option("--rho-x", opts.palm.rho_x, "Frobenius regularization weight");
  cmd->add_option("--gamma1", opts.palm.gamma1, "X-step factor (> 1)");
  cmd->add_option("--gamma2", opts.palm.gamma2, "U-step factor (> 1)");
  cmd->add_flag("--momentum", opts.palm.momentum, "enable the momentum term");
  cmd->add_option("--max-iters", opts.palm.max_iters, "outer iteration cap");
  cmd->add_option("--tol-obj", opts.palm.tol_obj, "objective-change stopping threshold");
  cmd->add_option("--tol-comp", opts.palm.tol_comp, "complementarity stopping threshold");
  cmd->add_option("--rank-threshold", opts.palm.rank_threshold, "eigenvalue cutoff for ranks");
  cmd->add_option("--mu", opts.mu, "baseline Tikhonov weight");
  cmd->add_option("--newton-tol", opts.palm.prox_params.newton_tol, "inner dual gradient tolerance");
  cmd->add_option("--max-newton-iters", opts.palm.prox_params.max_newton_iters,
                  "inner Newton iteration cap");
  cmd->add_option("--rho-max", opts.rho_max, "continuation cap for rho");
  cmd->add_option("--rho-factor", opts.rho_factor, "continuation growth factor (> 1 enables)");
}

SolveReport baseline_report(const Instance& inst, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  ProxResult res = trace_min_solve(inst.op, inst.b(), opts.mu, opts.palm.prox_params);
  SolveReport report;
  report.x_final = res.x;
  report.u_final = Matrix::Zero(inst.n(), inst.n());
  report.status = SolveStatus::Converged;
  report.rho_final = 0.0;
  report.prox_calls = 1;
  report.total_newton_iters = res.stats.newton_iters;
  report.total_cg_iters = res.stats.cg_iters;
  report.max_prox_grad_norm = res.stats.final_grad_norm;
  TraceRow row;
  row.iter = 0;
  row.f_rho = res.x.trace() + 0.5 * opts.mu * res.x.squaredNorm();
  row.comp = 0.0;
  row.rank_x = rank_above(res.x, opts.palm.rank_threshold);
  row.trace_u = 0.0;
  row.newton_iters = res.stats.newton_iters;
  row.cg_iters = res.stats.cg_iters;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  row.elapsed_ms = report.wall_ms;
  report.trace.push_back(row);
  report.diagnostics.rank_x = row.rank_x;
  return report;
}

SolveReport run_method(const Instance& inst, const std::string& method,
                       const SolverOptions& opts, const std::string& init) {
  if (method == "baseline") return baseline_report(inst, opts);
  PalmConfig config = opts.config(method == "fast-palm");
  if (init == "paper-optimum") {
    if (inst.meta.kind != InstanceKind::CounterexamplePenalty)
      throw CLI::ValidationError("--init paper-optimum requires the penalty counterexample");
    auto opt = counterexample_penalty_optimum();
    return solve(inst.op, config, opt.x, opt.u);
  }
  return solve(inst.op, config);
}

void print_summary(const Instance& inst, const std::string& method, const SolveReport& report) {
  if (log_level() == LogLevel::Off) return;
  std::cout << "method=" << method << " status=" << to_string(report.status)
            << " objective=" << report.trace.back().f_rho
            << " rank=" << report.trace.back().rank_x
            << " comp=" << report.trace.back().comp << " iters=" << report.iterations()
            << " time_ms=" << report.wall_ms << " n=" << inst.n() << " m=" << inst.op.m()
            << "\n";
  if (log_level() == LogLevel::Trace) std::cout << format_trace_csv(report);
}

int exit_code_for(const SolveReport& report) {
  return report.status == SolveStatus::Infeasible ? kExitInfeasible : 0;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  int n_points = 50;
  int n_samples = 150;
  int dim = 3;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& args) {
  if (args.count < 1) {
    std::cerr << "generate: --count must be >= 1\n";
    return 1;
  }
  fs::create_directories(args.out_dir);
  std::ostringstream manifest;
  for (int i = 0; i < args.count; ++i) {
    const std::uint64_t seed_i = derive_seed(args.seed, static_cast<std::uint64_t>(i));
    auto [inst, cloud] = gen_edm_instance(args.n_points, args.n_samples, args.dim, seed_i);
    char name[64];
    std::snprintf(name, sizeof(name), "instance_%03d.txt", i);
    const fs::path path = fs::path(args.out_dir) / name;
    save_instance(inst, path);
    manifest << path.string() << " n=" << inst.n() << " m=" << inst.op.m() << " seed=" << seed_i
             << "\n";
  }
  if (log_level() != LogLevel::Off) std::cout << manifest.str();
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance_path;
  std::string method = "palm";
  std::string init = "default";
  std::string out;
  SolverOptions opts;
};

int cmd_solve(const SolveArgs& args) {
  Instance inst = load_instance(args.instance_path);
  SolveReport report = run_method(inst, args.method, args.opts, args.init);
  const std::string out_path =
      args.out.empty() ? args.instance_path + ".trace.csv" : args.out;
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "solve: cannot open " << out_path << "\n";
    return 1;
  }
  out << format_trace_csv(report);
  print_summary(inst, args.method, report);
  return exit_code_for(report);
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::vector<std::string> instance_paths;
  std::string out = "compare.csv";
  int jobs = 0;
  SolverOptions opts;
};

struct CompareRow {
  std::string name;
  int rank_palm = 0, rank_fast = 0, rank_base = 0;
  double ms_palm = 0, ms_fast = 0, ms_base = 0;
  bool ok = true;
};

CompareRow compare_one(const std::string& path, const SolverOptions& opts) {
  CompareRow row;
  row.name = fs::path(path).filename().string();
  Instance inst = load_instance(path);
  try {
    SolveReport palm_rep = run_method(inst, "palm", opts, "default");
    SolveReport fast_rep = run_method(inst, "fast-palm", opts, "default");
    SolveReport base_rep = run_method(inst, "baseline", opts, "default");
    row.rank_palm = palm_rep.trace.back().rank_x;
    row.rank_fast = fast_rep.trace.back().rank_x;
    row.rank_base = base_rep.trace.back().rank_x;
    row.ms_palm = palm_rep.wall_ms;
    row.ms_fast = fast_rep.wall_ms;
    row.ms_base = base_rep.wall_ms;
    row.ok = palm_rep.status != SolveStatus::Infeasible &&
             fast_rep.status != SolveStatus::Infeasible;
  } catch (const SolverError&) {
    row.ok = false;
  }
  return row;
}

std::vector<CompareRow> compare_all(const std::vector<std::string>& paths,
                                    const SolverOptions& opts, int jobs) {
  std::vector<CompareRow> rows(paths.size());
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      std::max(1, jobs > 0 ? jobs : static_cast<int>(hw > 0 ? hw : 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= paths.size()) return;
      rows[i] = compare_one(paths[i], opts);
    }
  };
  if (workers == 1 || paths.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

int cmd_compare(const CompareArgs& args) {
  auto rows = compare_all(args.instance_paths, args.opts, args.jobs);
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"instance", "rank_palm", "rank_fast_palm", "rank_baseline", "time_palm_ms",
                   "time_fast_palm_ms", "time_baseline_ms"});
  double sp = 0, sf = 0, sb = 0, tp = 0, tf = 0, tb = 0;
  bool all_ok = true;
  for (const auto& r : rows) {
    cells.push_back({r.name, std::to_string(r.rank_palm), std::to_string(r.rank_fast),
                     std::to_string(r.rank_base), std::to_string(r.ms_palm),
                     std::to_string(r.ms_fast), std::to_string(r.ms_base)});
    sp += r.rank_palm;
    sf += r.rank_fast;
    sb += r.rank_base;
    tp += r.ms_palm;
    tf += r.ms_fast;
    tb += r.ms_base;
    all_ok = all_ok && r.ok;
  }
  const double n = static_cast<double>(rows.size());
  cells.push_back({"mean", std::to_string(sp / n), std::to_string(sf / n),
                   std::to_string(sb / n), std::to_string(tp / n), std::to_string(tf / n),
                   std::to_string(tb / n)});
  std::ofstream out(args.out);
  if (!out) {
    std::cerr << "compare: cannot open " << args.out << "\n";
    return 1;
  }
  out << write_csv(cells);
  if (log_level() != LogLevel::Off) std::cout << write_csv(cells);
  return all_ok ? 0 : kExitNonConvergence;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  int n_points = 50;
  int dim = 3;
  int count = 20;
  int from = 150;
  int to = 195;
  int step = 5;
  std::uint64_t seed = 0;
  std::string out = "sweep.csv";
  int jobs = 0;
  SolverOptions opts;
};

int cmd_sweep(const SweepArgs& args) {
  if (args.step <= 0 || args.to < args.from || args.count < 1) {
    std::cerr << "sweep: invalid range\n";
    return 1;
  }
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"n_samples", "mean_rank_fast_palm", "mean_rank_baseline"});
  for (int level = args.from; level <= args.to; level += args.step) {
    double sum_fast = 0, sum_base = 0;
    for (int i = 0; i < args.count; ++i) {
      const std::uint64_t seed_i =
          derive_seed(args.seed, static_cast<std::uint64_t>(level) * 1000 + i);
      auto [inst, cloud] = gen_edm_instance(args.n_points, level, args.dim, seed_i);
      SolveReport fast_rep = run_method(inst, "fast-palm", args.opts, "default");
      SolveReport base_rep = run_method(inst, "baseline", args.opts, "default");
      sum_fast += fast_rep.trace.back().rank_x;
      sum_base += base_rep.trace.back().rank_x;
    }
    cells.push_back({std::to_string(level), std::to_string(sum_fast / args.count),
                     std::to_string(sum_base / args.count)});
    if (log_level() != LogLevel::Off)
      std::cout << "n_samples=" << level << " mean_rank_fast_palm=" << sum_fast / args.count
                << " mean_rank_baseline=" << sum_base / args.count << "\n";
  }
  std::ofstream out(args.out);
  if (!out) {
    std::cerr << "sweep: cannot open " << args.out << "\n";
    return 1;
  }
  out << write_csv(cells);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank minimization over affine PSD constraints via penalized "
               "complementarity PALM"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write EDM completion instance files");
  generate->add_option("--n-points", gen.n_points, "number of points");
  generate->add_option("--n-samples", gen.n_samples, "number of sampled distances");
  generate->add_option("--dim", gen.dim, "embedding dimension");
  generate->add_option("--count", gen.count, "number of instances")->required();
  generate->add_option("--seed", gen.seed, "master seed");
  generate->add_option("--out", gen.out_dir, "output directory");

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance and write its trace");
  solve_cmd->add_option("instance", sol.instance_path, "instance file")->required();
  solve_cmd->add_option("--method", sol.method, "palm | fast-palm | baseline")
      ->check(CLI::IsMember({"palm", "fast-palm", "baseline"}));
  solve_cmd->add_option("--init", sol.init, "default | paper-optimum")
      ->check(CLI::IsMember({"default", "paper-optimum"}));
  solve_cmd->add_option("--out", sol.out, "trace CSV path");
  add_solver_flags(solve_cmd, sol.opts);

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "rank comparison table over instances");
  compare_cmd->add_option("instances", cmp.instance_paths, "instance files")->required();
  compare_cmd->add_option("--out", cmp.out, "table CSV path");
  compare_cmd->add_option("--jobs", cmp.jobs, "parallel solves (default: cores)");
  add_solver_flags(compare_cmd, cmp.opts);

  SweepArgs swp;
  auto* sweep_cmd = app.add_subcommand("sweep", "mean ranks across sample counts");
  sweep_cmd->add_option("--n-points", swp.n_points, "number of points");
  sweep_cmd->add_option("--dim", swp.dim, "embedding dimension");
  sweep_cmd->add_option("--count", swp.count, "instances per sample count");
  sweep_cmd->add_option("--from", swp.from, "first sample count");
  sweep_cmd->add_option("--to", swp.to, "last sample count");
  sweep_cmd->add_option("--step", swp.step, "sample count increment");
  sweep_cmd->add_option("--seed", swp.seed, "master seed");
  sweep_cmd->add_option("--out", swp.out, "sweep CSV path");
  sweep_cmd->add_option("--jobs", swp.jobs, "parallel solves (default: cores)");
  add_solver_flags(sweep_cmd, swp.opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve_cmd) return cmd_solve(sol);
    if (*compare_cmd) return cmd_compare(cmp);
    if (*sweep_cmd) return cmd_sweep(swp);
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const StallError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
