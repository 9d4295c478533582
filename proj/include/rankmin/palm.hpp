#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankmin/affine_operator.hpp"
#include "rankmin/diagnostics.hpp"
#include "rankmin/newton_projection.hpp"
#include "rankmin/types.hpp"

// Outer solver for the penalized complementarity objective
//   f_rho(X, U) = n - <I, U> + rho <X, U> + (rho_X/2) ||X||_F^2
// over {A(X) = b, X PSD} x {0 <= U <= I}, by proximal alternating linearized
// minimization with optional momentum (Fast PALM) and optional penalty
// continuation in rho.

namespace rankmin {

struct Continuation {
  double rho_max = 1e4;
  double factor = 2.0;
};

struct PalmConfig {
  double rho = 10.0;
  double rho_x = 1e-4;
  double gamma1 = 1.1;
  double gamma2 = 1.1;
  bool momentum = false;
  int max_iters = 200;
  double tol_obj = 1e-9;     // objective-change threshold, 5 consecutive hits stop
  double tol_comp = 1e-6;    // complementarity threshold (with stable rank)
  std::optional<Continuation> continuation;
  ProxXParams prox_params;
  double rank_threshold = 0.01;
  // Procedure-as-printed variant: evaluate the U-step gradient at X^k instead
  // of the freshly computed X^{k+1}.
  bool u_step_uses_previous_x = false;

  void validate() const;
};

struct PalmState {
  int k = 0;
  Matrix x, u;
  Matrix x_prev, u_prev;
  Vector y_warm;
  double c_k = 0.0, d_k = 0.0;
  ProxStats last_prox_stats;  // from the X update that produced this state
};

struct TraceRow {
  int iter = 0;
  double f_rho = 0.0;
  double comp = 0.0;
  int rank_x = 0;
  double trace_u = 0.0;
  int newton_iters = 0;
  long cg_iters = 0;
  double elapsed_ms = 0.0;
};

enum class SolveStatus { Converged, MaxIters, Infeasible };

std::string to_string(SolveStatus status);

struct SolveReport {
  Matrix x_final, u_final;
  std::vector<TraceRow> trace;  // row 0 is the initial point
  SolveStatus status = SolveStatus::MaxIters;
  DiagnosticsReport diagnostics;
  double rho_final = 0.0;
  double wall_ms = 0.0;
  // prox_x quality across the whole run
  int prox_calls = 0;
  long total_newton_iters = 0;
  long total_cg_iters = 0;
  double max_prox_grad_norm = 0.0;

  int iterations() const { return static_cast<int>(trace.size()) - 1; }
};

double objective(const Matrix& x, const Matrix& u, double rho, double rho_x);

// Momentum weight (k-2)/(k+1), clamped at zero for the first two steps.
double momentum_beta(int k);

// One Gauss-Seidel sweep: X update via the Newton projection, then U update
// via the closed form, at step weights c_k = gamma1*rho and d_k = gamma2*rho.
PalmState palm_step(const PalmState& state, const AffineOperator& op, const PalmConfig& config);

SolveReport solve(const AffineOperator& op, const PalmConfig& config);
SolveReport solve(const AffineOperator& op, const PalmConfig& config, Matrix x0, Matrix u0);

}  // namespace rankmin
