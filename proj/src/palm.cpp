#include "rankmin/palm.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rankmin/box_projection.hpp"
#include "rankmin/errors.hpp"
#include "rankmin/spectral.hpp"

namespace rankmin {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

TraceRow make_row(int iter, const Matrix& x, const Matrix& u, const PalmConfig& config,
                  double rho, const ProxStats& stats, double elapsed_ms) {
  TraceRow row;
  row.iter = iter;
  row.f_rho = objective(x, u, rho, config.rho_x);
  row.comp = frobenius_inner(x, u);
  row.rank_x = rank_above(x, config.rank_threshold);
  row.trace_u = u.trace();
  row.newton_iters = stats.newton_iters;
  row.cg_iters = stats.cg_iters;
  row.elapsed_ms = elapsed_ms;
  return row;
}

// rank unchanged across the most recent `window` rows
bool rank_stable(const std::vector<TraceRow>& trace, int window) {
  if (static_cast<int>(trace.size()) < window) return false;
  const int r = trace.back().rank_x;
  for (int i = 0; i < window; ++i) {
    if (trace[trace.size() - 1 - i].rank_x != r) return false;
  }
  return true;
}

}  // namespace

void PalmConfig::validate() const {
  if (!(rho > 0)) throw std::invalid_argument("PalmConfig: rho must be > 0");
  if (rho_x < 0) throw std::invalid_argument("PalmConfig: rho_x must be >= 0");
  if (!(gamma1 > 1) || !(gamma2 > 1))
    throw std::invalid_argument("PalmConfig: gamma1 and gamma2 must be > 1");
  if (max_iters <= 0) throw std::invalid_argument("PalmConfig: max_iters must be > 0");
  if (!(tol_comp > 0)) throw std::invalid_argument("PalmConfig: tol_comp must be > 0");
  if (!(rank_threshold > 0)) throw std::invalid_argument("PalmConfig: rank_threshold must be > 0");
  if (tol_obj < 0) throw std::invalid_argument("PalmConfig: tol_obj must be >= 0");
  if (continuation && !(continuation->factor > 1))
    throw std::invalid_argument("PalmConfig: continuation factor must be > 1");
  prox_params.validate();
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

double objective(const Matrix& x, const Matrix& u, double rho, double rho_x) {
  const double n = static_cast<double>(x.rows());
  return n - u.trace() + rho * frobenius_inner(x, u) + 0.5 * rho_x * x.squaredNorm();
}

double momentum_beta(int k) {
  return std::max(0.0, (k - 2.0) / (k + 1.0));
}

PalmState palm_step(const PalmState& state, const AffineOperator& op, const PalmConfig& config) {
  if (state.x.rows() != op.n() || state.u.rows() != op.n())
    throw std::invalid_argument("palm_step: state does not match operator dimension");
  const double rho = config.rho;
  const double c_k = config.gamma1 * rho;
  const double d_k = config.gamma2 * rho;
  const double beta = config.momentum ? momentum_beta(state.k) : 0.0;

  Matrix x_tilde = state.x - (rho / c_k) * state.u;
  if (beta > 0.0) x_tilde += beta * (state.x - state.x_prev);
  ProxResult px =
      prox_x_solve(x_tilde, op, op.rhs(), c_k, config.rho_x, config.prox_params, state.y_warm);

  const Matrix& x_for_u = config.u_step_uses_previous_x ? state.x : px.x;
  Matrix u_tilde = state.u - (rho / d_k) * x_for_u;
  if (beta > 0.0) u_tilde += beta * (state.u - state.u_prev);
  Matrix u_next = prox_u_solve(u_tilde, d_k);

  PalmState next;
  next.k = state.k + 1;
  next.x = std::move(px.x);
  next.u = std::move(u_next);
  next.x_prev = state.x;
  next.u_prev = state.u;
  next.y_warm = std::move(px.y);
  next.c_k = c_k;
  next.d_k = d_k;
  next.last_prox_stats = px.stats;
  return next;
}

SolveReport solve(const AffineOperator& op, const PalmConfig& config) {
  config.validate();
  const Index n = op.n();
  // X0: projection of the zero matrix onto the constraints; U0 = 0, which
  // makes the first X step a pure feasibility projection.
  ProxResult init;
  try {
    init = psd_affine_project(Matrix::Zero(n, n), op, op.rhs(), config.prox_params, Vector());
  } catch (const InfeasibleError&) {
    SolveReport report;
    report.status = SolveStatus::Infeasible;
    report.x_final = Matrix::Zero(n, n);
    report.u_final = Matrix::Zero(n, n);
    report.rho_final = config.rho;
    report.trace.push_back(
        make_row(0, report.x_final, report.u_final, config, config.rho, ProxStats{}, 0.0));
    return report;
  }
  SolveReport report = solve(op, config, init.x, Matrix::Zero(n, n));
  // fold the initialization projection into row 0 and the prox totals
  report.trace.front().newton_iters = init.stats.newton_iters;
  report.trace.front().cg_iters = init.stats.cg_iters;
  ++report.prox_calls;
  report.total_newton_iters += init.stats.newton_iters;
  report.total_cg_iters += init.stats.cg_iters;
  report.max_prox_grad_norm = std::max(report.max_prox_grad_norm, init.stats.final_grad_norm);
  return report;
}

SolveReport solve(const AffineOperator& op, const PalmConfig& config, Matrix x0, Matrix u0) {
  config.validate();
  if (x0.rows() != op.n() || x0.cols() != op.n() || u0.rows() != op.n() || u0.cols() != op.n())
    throw std::invalid_argument("solve: initial point does not match operator dimension");

  const auto t_start = Clock::now();
  const int stability_window = 5;

  PalmState state;
  state.x = symmetrized(x0);
  state.u = symmetrized(u0);
  state.x_prev = state.x;
  state.u_prev = state.u;
  state.y_warm = Vector::Zero(op.m());

  double rho = config.rho;
  PalmConfig active = config;

  SolveReport report;
  report.status = SolveStatus::MaxIters;
  report.trace.push_back(make_row(0, state.x, state.u, active, rho, ProxStats{}, 0.0));

  int obj_stable_count = 0;
  double prev_obj = report.trace.front().f_rho;

  for (int k = 1; k <= config.max_iters; ++k) {
    const auto t_iter = Clock::now();
    active.rho = rho;
    try {
      state = palm_step(state, op, active);
    } catch (const InfeasibleError&) {
      report.status = SolveStatus::Infeasible;
      break;
    }
    ++report.prox_calls;
    report.total_newton_iters += state.last_prox_stats.newton_iters;
    report.total_cg_iters += state.last_prox_stats.cg_iters;
    report.max_prox_grad_norm =
        std::max(report.max_prox_grad_norm, state.last_prox_stats.final_grad_norm);

    report.trace.push_back(
        make_row(k, state.x, state.u, active, rho, state.last_prox_stats, ms_since(t_iter)));
    const TraceRow& row = report.trace.back();

    const double delta_obj = std::abs(row.f_rho - prev_obj);
    if (delta_obj <= config.tol_obj)
      ++obj_stable_count;
    else
      obj_stable_count = 0;
    prev_obj = row.f_rho;

    // complementarity stop: comp below tolerance with the rank settled and the
    // objective no longer moving (U may still be filling in while <X,U> = 0)
    if (row.comp <= config.tol_comp && rank_stable(report.trace, stability_window) &&
        delta_obj <= config.tol_obj) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (obj_stable_count >= stability_window) {
      if (config.continuation && row.comp > config.tol_comp && rho < config.continuation->rho_max) {
        rho = std::min(config.continuation->rho_max, config.continuation->factor * rho);
        obj_stable_count = 0;
        prev_obj = objective(state.x, state.u, rho, config.rho_x);
        continue;
      }
      report.status = SolveStatus::Converged;
      break;
    }
  }

  report.x_final = state.x;
  report.u_final = state.u;
  report.rho_final = rho;
  if (report.status == SolveStatus::Infeasible) {
    // stationarity residuals need feasible projections; keep the cheap fields
    report.diagnostics.complementarity = frobenius_inner(state.x, state.u);
    report.diagnostics.rank_x = rank_above(state.x, config.rank_threshold);
    report.diagnostics.trace_u = state.u.trace();
  } else {
    report.diagnostics = make_diagnostics(state.x, state.u, op, rho, config.rho_x,
                                          config.prox_params, config.rank_threshold);
  }
  report.wall_ms = ms_since(t_start);
  return report;
}

}  // namespace rankmin
