// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criteria 5-7 run the desk-scale EDM experiment (20 instances, 50 points,
// 150 sampled distances, 200-iteration cap).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rankmin/box_projection.hpp"
#include "rankmin/diagnostics.hpp"
#include "rankmin/instances.hpp"
#include "rankmin/palm.hpp"
#include "rankmin/rng.hpp"
#include "rankmin/spectral.hpp"
#include "rankmin/trace_baseline.hpp"
#include "test_util.hpp"

using namespace rankmin;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kMasterSeed = 7;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<CriterionResult> g_results;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({id, name, pass, detail});
  std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

// prox_x quality accumulated over every solve the suite performs
struct NewtonLedger {
  long prox_calls = 0;
  long newton_iters = 0;
  double max_grad = 0.0;

  void add(const SolveReport& r) {
    prox_calls += r.prox_calls;
    newton_iters += r.total_newton_iters;
    max_grad = std::max(max_grad, r.max_prox_grad_norm);
  }
  void add(const ProxStats& s) {
    prox_calls += 1;
    newton_iters += s.newton_iters;
    max_grad = std::max(max_grad, s.final_grad_norm);
  }
};

NewtonLedger g_newton;

// ---------------------------------------------------------------- criterion 1

void criterion_1() {
  const auto t0 = Clock::now();
  auto rng = make_rng(1001);
  ProxXParams params;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 5, m = 3;
    Matrix feas = testutil::random_psd(rng, n, n);
    AffineOperator op = testutil::random_feasible_operator(rng, n, m, feas);
    Matrix g = testutil::random_symmetric(rng, n, 2.0);
    ProxResult res = prox_x_solve(g, op, op.rhs(), 1.0, 0.0, params, Vector());
    g_newton.add(res.stats);
    Matrix ref = oracle::dykstra_project(g, op, op.rhs(), 1e-11, 300000);
    worst = std::max(worst, (res.x - ref).norm());
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream detail;
  detail << "max |X - oracle|_F = " << worst << ", " << elapsed << " s";
  report(1, "projection-oracle equivalence", worst <= 1e-6 && elapsed < 5.0, detail.str());
}

// ---------------------------------------------------------------- criterion 2

void criterion_2() {
  const auto t0 = Clock::now();
  auto rng = make_rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix u_tilde = testutil::random_symmetric(rng, 4, 1.5);
    const double d = 0.5 + 9.5 * (trial / 49.0);
    Matrix closed = prox_u_solve(u_tilde, d);
    Matrix ref = oracle::box_prox_pg(u_tilde, d);
    worst = std::max(worst, (closed - ref).norm());
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream detail;
  detail << "max |U - oracle|_F = " << worst << ", " << elapsed << " s";
  report(2, "U-update oracle equivalence", worst <= 1e-6 && elapsed < 2.0, detail.str());
}

// ---------------------------------------------------------------- criterion 3

void criterion_3() {
  bool monotone = true;
  double worst_rise = 0.0;
  for (int i = 0; i < 5; ++i) {
    auto [inst, cloud] =
        gen_edm_instance(50, 150, 3, derive_seed(kMasterSeed, 100 + static_cast<std::uint64_t>(i)));
    PalmConfig config;
    config.momentum = false;
    config.max_iters = 200;
    config.tol_obj = 0.0;      // run the full budget
    config.tol_comp = 1e-30;   // disable the complementarity stop
    config.prox_params.newton_tol = 1e-10;
    SolveReport rep = solve(inst.op, config);
    g_newton.add(rep);
    for (std::size_t k = 1; k < rep.trace.size(); ++k) {
      const double rise = rep.trace[k].f_rho - rep.trace[k - 1].f_rho;
      worst_rise = std::max(worst_rise, rise);
      if (rise > 1e-10) monotone = false;
    }
  }
  std::ostringstream detail;
  detail << "worst objective rise = " << worst_rise;
  report(3, "PALM monotone decrease", monotone, detail.str());
}

// ---------------------------------------------------------------- criterion 4

void criterion_4() {
  auto opt = counterexample_penalty_optimum();
  const double f = objective(opt.x, opt.u, opt.rho, 0.0);
  const bool exact = (f == 1.5);
  auto checks = eigenpair_property_check(opt.x, opt.u, opt.rho, 1e-6);
  bool all_ok = true;
  for (const auto& c : checks) all_ok = all_ok && c.satisfied;
  std::ostringstream detail;
  detail << "objective = " << f << ", eigenpair checks "
         << (all_ok ? "pass" : "fail") << " at 1/rho = " << 1.0 / opt.rho;
  report(4, "counterexample regression", exact && all_ok, detail.str());
}

// ------------------------------------------------------- criteria 5, 6 and 7

struct EdmRun {
  SolveReport palm;
  SolveReport fast;
  SolveReport base;
};

std::vector<EdmRun> run_edm_experiment(int count) {
  std::vector<EdmRun> runs;
  runs.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto [inst, cloud] =
        gen_edm_instance(50, 150, 3, derive_seed(kMasterSeed, static_cast<std::uint64_t>(i)));
    PalmConfig config;
    config.max_iters = 200;

    EdmRun run;
    config.momentum = false;
    run.palm = solve(inst.op, config);
    config.momentum = true;
    run.fast = solve(inst.op, config);
    ProxXParams base_params;
    const auto t0 = Clock::now();
    ProxResult base = trace_min_solve(inst.op, inst.b(), 1e-2, base_params);
    run.base.wall_ms = 1000.0 * seconds_since(t0);
    run.base.x_final = base.x;
    TraceRow brow;
    brow.rank_x = rank_above(base.x, config.rank_threshold);
    run.base.trace.push_back(brow);
    g_newton.add(run.palm);
    g_newton.add(run.fast);
    g_newton.add(base.stats);
    runs.push_back(std::move(run));
  }
  return runs;
}

void criterion_5(const std::vector<EdmRun>& runs) {
  int rank_le4 = 0, rank_eq3 = 0;
  double max_ms = 0.0;
  for (const auto& run : runs) {
    const int r = run.fast.trace.back().rank_x;
    if (r <= 4) ++rank_le4;
    if (r <= 3) ++rank_eq3;
    max_ms = std::max(max_ms, run.fast.wall_ms);
  }
  std::ostringstream detail;
  detail << rank_le4 << "/20 rank <= 4, " << rank_eq3 << "/20 rank 3, slowest instance "
         << max_ms / 1000.0 << " s";
  report(5, "rank recovery (fast PALM)",
         rank_le4 >= 15 && rank_eq3 >= 12 && max_ms <= 60000.0, detail.str());
}

void criterion_6(const std::vector<EdmRun>& runs) {
  double mean_fast = 0.0, mean_base = 0.0;
  for (const auto& run : runs) {
    mean_fast += run.fast.trace.back().rank_x;
    mean_base += run.base.trace.back().rank_x;
  }
  mean_fast /= runs.size();
  mean_base /= runs.size();
  std::ostringstream detail;
  detail << "mean rank: fast PALM " << mean_fast << " vs baseline " << mean_base;
  report(6, "baseline dominance", mean_base > mean_fast, detail.str());
}

int first_reach(const SolveReport& rep, double target) {
  for (const auto& row : rep.trace)
    if (row.f_rho <= target) return row.iter;
  return -1;
}

void criterion_7(const std::vector<EdmRun>& runs) {
  int faster = 0;
  for (const auto& run : runs) {
    const double target = run.palm.trace.back().f_rho + 1e-3;
    const int k_fast = first_reach(run.fast, target);
    const int k_palm = first_reach(run.palm, target);
    if (k_fast >= 0 && k_fast < k_palm) ++faster;
  }
  std::ostringstream detail;
  detail << faster << "/20 instances reached the PALM objective earlier";
  report(7, "momentum acceleration", faster >= 14, detail.str());
}

// ---------------------------------------------------------------- criterion 8

void criterion_8() {
  auto rng = make_rng(1008);
  double worst = 0.0;
  int built = 0;
  while (built < 10) {
    const Index n = 6, m = 4;
    const Index rank = 1 + built % 3;
    Matrix xbar = testutil::random_psd(rng, n, rank);
    auto dec = eig_sym(xbar);
    double lam_min_pos = 1e300;
    for (Index i = 0; i < n; ++i)
      if (dec.values[i] > 1e-8) lam_min_pos = std::min(lam_min_pos, dec.values[i]);
    if (lam_min_pos < 0.05) continue;  // keep rho = 2/lambda well scaled
    ++built;

    AffineOperator op = testutil::random_feasible_operator(rng, n, m, xbar);
    Matrix ubar = certificate_u(xbar, 1e-8);

    PalmConfig config;
    config.rho = 2.0 / lam_min_pos;
    config.rho_x = 0.0;
    PalmState s0;
    s0.x = xbar;
    s0.u = ubar;
    s0.x_prev = xbar;
    s0.u_prev = ubar;
    s0.y_warm = Vector::Zero(m);
    const double f0 = objective(s0.x, s0.u, config.rho, config.rho_x);
    PalmState s1 = palm_step(s0, op, config);
    const double f1 = objective(s1.x, s1.u, config.rho, config.rho_x);
    worst = std::max(worst, std::abs(f1 - f0));
  }
  std::ostringstream detail;
  detail << "max |f after one step - f| = " << worst;
  report(8, "exact-penalty fixed point", worst <= 1e-8, detail.str());
}

// ---------------------------------------------------------------- criterion 9

void criterion_9() {
  const double mean_newton =
      g_newton.prox_calls > 0 ? static_cast<double>(g_newton.newton_iters) / g_newton.prox_calls
                              : 0.0;
  const bool grads_ok = g_newton.max_grad <= 1e-8;

  // V_y symmetry and positive semidefiniteness on random draws
  auto rng = make_rng(1009);
  const Index n = 6, m = 4;
  Matrix feas = testutil::random_psd(rng, n, n);
  AffineOperator op = testutil::random_feasible_operator(rng, n, m, feas);
  bool vy_ok = true;
  for (int rep = 0; rep < 100; ++rep) {
    Matrix g = testutil::random_symmetric(rng, n, 2.0);
    Vector y = testutil::random_vector(rng, m);
    DualState state = make_dual_state(g, op, y);
    Vector h = testutil::random_vector(rng, m);
    Vector w = testutil::random_vector(rng, m);
    const double hw = h.dot(vy_apply(state, op, w, 0.0));
    const double wh = w.dot(vy_apply(state, op, h, 0.0));
    if (std::abs(hw - wh) > 1e-10 * (1.0 + std::abs(hw))) vy_ok = false;
    if (h.dot(vy_apply(state, op, h, 0.0)) < -1e-10) vy_ok = false;
  }

  std::ostringstream detail;
  detail << "max final |grad theta| = " << g_newton.max_grad << ", mean Newton iters/solve = "
         << mean_newton << " over " << g_newton.prox_calls << " solves, V_y checks "
         << (vy_ok ? "pass" : "fail");
  report(9, "semismooth Newton quality", grads_ok && mean_newton <= 25.0 && vy_ok, detail.str());
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  auto runs = run_edm_experiment(20);
  criterion_5(runs);
  criterion_6(runs);
  criterion_7(runs);
  criterion_8();
  criterion_9();

  int failed = 0;
  for (const auto& r : g_results)
    if (!r.pass) ++failed;
  std::printf("%d/%zu criteria passed (%.1f s total)\n", static_cast<int>(g_results.size()) - failed,
              g_results.size(), seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
