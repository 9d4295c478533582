#pragma once

#include <vector>

#include "rankmin/affine_operator.hpp"
#include "rankmin/spectral.hpp"
#include "rankmin/types.hpp"

// X update: projection of a target matrix onto {A(X) = b, X PSD}, computed by
// a semismooth Newton method on the unconstrained dual
//   min_y theta(y) = 1/2 ||(G + A*y)_+||_F^2 - b'y
// with matrix-free conjugate gradients for the Newton direction.

namespace rankmin {

struct ProxXParams {
  double newton_tol = 1e-8;      // stop when ||grad theta|| <= newton_tol
  int max_newton_iters = 200;
  double cg_tol_factor = 0.1;    // eta in (0,1); eta_k = min(eta, ||grad||^0.5)
  int max_cg_iters = 0;          // 0 = 5*m
  double armijo_sigma = 1e-4;    // sigma in (0, 0.5)
  double backtrack_rho = 0.5;    // step ratio in (0,1)
  double jacobian_eps = 1e-8;    // eps_k = jacobian_eps * (1 + ||grad||)

  void validate() const;
};

// Spectral data of W = G + A*y at a dual point, with eigenvalue indices
// partitioned by sign: alpha positive, beta zero, gamma negative. The zero
// band is |lambda| <= 1e-12 * max(1, lambda_max).
struct DualState {
  Vector y;
  EigenDecomposition<double> decomposition;
  std::vector<int> alpha, beta, gamma;
};

DualState make_dual_state(const Matrix& g, const AffineOperator& op, const Vector& y);

double theta(const Matrix& g, const AffineOperator& op, const Vector& b, const Vector& y);

Vector grad_theta(const Matrix& g, const AffineOperator& op, const Vector& b, const Vector& y);

// (V_y + eps I) h where V_y h = A(P (M_y o (P' (A*h) P)) P') is the
// generalized Jacobian of F(y) = A((G + A*y)_+) built from the tau blocks.
Vector vy_apply(const DualState& state, const AffineOperator& op, const Vector& h, double eps);

struct ProxStats {
  int newton_iters = 0;
  long cg_iters = 0;
  int backtracks = 0;
  double final_grad_norm = 0.0;
};

struct ProxResult {
  Matrix x;
  Vector y;
  ProxStats stats;
};

// Projection of G onto {A(X)=b, X PSD} via the dual Newton solver. This is the
// primitive both the X update and the trace-minimization baseline wrap.
ProxResult psd_affine_project(const Matrix& g, const AffineOperator& op, const Vector& b,
                              const ProxXParams& params, const Vector& y_warm);

// Solves min rho_X ||X||_F^2 + c_k ||X - Xtilde||_F^2 over {A(X)=b, X PSD},
// i.e. the projection of G = c_k/(c_k + rho_X) * Xtilde.
ProxResult prox_x_solve(const Matrix& x_tilde, const AffineOperator& op, const Vector& b,
                        double c_k, double rho_x, const ProxXParams& params,
                        const Vector& y_warm);

}  // namespace rankmin
