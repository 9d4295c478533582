#include "rankmin/newton_projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rankmin/errors.hpp"

namespace rankmin {

namespace {

constexpr double kDualDivergenceNorm = 1e12;
constexpr int kMaxBacktracks = 50;

// Everything the Newton loop needs at one dual point, computed from a single
// eigendecomposition of W = G + A*y.
struct DualPoint {
  Vector y;
  EigenDecomposition<double> dec;
  double theta = 0.0;
  Vector grad;

  Matrix positive_part() const {
    return map_spectrum(dec, [](double v) { return v > 0.0 ? v : 0.0; });
  }
};

DualPoint evaluate(const Matrix& g, const AffineOperator& op, const Vector& b, Vector y) {
  DualPoint p;
  p.dec = eig_sym(y.size() > 0 ? Matrix(g + op.adjoint(y)) : g);
  Matrix xplus = p.positive_part();
  p.theta = 0.5 * xplus.squaredNorm() - b.dot(y);
  p.grad = op.apply(xplus) - b;
  p.y = std::move(y);
  return p;
}

void partition_by_sign(const EigenDecomposition<double>& dec, std::vector<int>& alpha,
                       std::vector<int>& beta, std::vector<int>& gamma) {
  alpha.clear();
  beta.clear();
  gamma.clear();
  const Index n = dec.values.size();
  const double lam_max = n > 0 ? dec.values[0] : 0.0;
  const double eps_eig = 1e-12 * std::max(1.0, std::abs(lam_max));
  for (Index i = 0; i < n; ++i) {
    const double v = dec.values[i];
    if (v > eps_eig)
      alpha.push_back(static_cast<int>(i));
    else if (v < -eps_eig)
      gamma.push_back(static_cast<int>(i));
    else
      beta.push_back(static_cast<int>(i));
  }
}

// Hadamard mask M_y: ones on (alpha,alpha), (alpha,beta), (beta,alpha);
// tau_ij = lambda_i / (lambda_i - lambda_j) coupling (alpha,gamma), mirrored.
Matrix build_mask(const EigenDecomposition<double>& dec, const std::vector<int>& alpha,
                  const std::vector<int>& beta, const std::vector<int>& gamma) {
  const Index n = dec.values.size();
  Matrix mask = Matrix::Zero(n, n);
  for (int i : alpha) {
    for (int j : alpha) mask(i, j) = 1.0;
    for (int j : beta) {
      mask(i, j) = 1.0;
      mask(j, i) = 1.0;
    }
    for (int j : gamma) {
      const double tau = dec.values[i] / (dec.values[i] - dec.values[j]);
      mask(i, j) = tau;
      mask(j, i) = tau;
    }
  }
  return mask;
}

struct JacobianOperator {
  const AffineOperator& op;
  const EigenDecomposition<double>& dec;
  Matrix mask;
  double eps;

  Vector apply(const Vector& h) const {
    Matrix s = op.adjoint(h);
    Matrix t = dec.vectors.transpose() * s * dec.vectors;
    t.array() *= mask.array();
    Matrix back = dec.vectors * t * dec.vectors.transpose();
    return op.apply(symmetrized(back)) + eps * h;
  }
};

// CG on (V + eps I) d = -grad, stopping at ||residual|| <= cg_tol * ||grad||.
Vector conjugate_gradient(const JacobianOperator& vop, const Vector& grad, double cg_tol,
                          int max_iters, long& cg_counter) {
  const Index m = grad.size();
  Vector d = Vector::Zero(m);
  Vector r = -grad;  // residual of (V+epsI)d + grad = 0 at d = 0
  Vector p = r;
  double rr = r.squaredNorm();
  const double stop = cg_tol * grad.norm();
  if (std::sqrt(rr) <= stop) return d;
  for (int it = 0; it < max_iters; ++it) {
    ++cg_counter;
    Vector vp = vop.apply(p);
    const double pvp = p.dot(vp);
    if (pvp <= 0.0) break;  // curvature lost to roundoff; keep current d
    const double step = rr / pvp;
    d += step * p;
    r -= step * vp;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= stop) break;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return d;
}

}  // namespace

void ProxXParams::validate() const {
  if (!(newton_tol > 0)) throw std::invalid_argument("ProxXParams: newton_tol must be > 0");
  if (max_newton_iters <= 0) throw std::invalid_argument("ProxXParams: max_newton_iters must be > 0");
  if (!(cg_tol_factor > 0 && cg_tol_factor < 1))
    throw std::invalid_argument("ProxXParams: cg_tol_factor must be in (0,1)");
  if (!(armijo_sigma > 0 && armijo_sigma < 0.5))
    throw std::invalid_argument("ProxXParams: armijo_sigma must be in (0,0.5)");
  if (!(backtrack_rho > 0 && backtrack_rho < 1))
    throw std::invalid_argument("ProxXParams: backtrack_rho must be in (0,1)");
  if (!(jacobian_eps > 0)) throw std::invalid_argument("ProxXParams: jacobian_eps must be > 0");
}

DualState make_dual_state(const Matrix& g, const AffineOperator& op, const Vector& y) {
  if (y.size() != op.m()) throw std::invalid_argument("make_dual_state: dimension mismatch");
  DualState state;
  state.y = y;
  state.decomposition = eig_sym(y.size() > 0 ? Matrix(g + op.adjoint(y)) : g);
  partition_by_sign(state.decomposition, state.alpha, state.beta, state.gamma);
  return state;
}

double theta(const Matrix& g, const AffineOperator& op, const Vector& b, const Vector& y) {
  if (g.rows() != op.n() || g.cols() != op.n())
    throw std::invalid_argument("theta: dimension mismatch");
  if (y.size() != op.m() || b.size() != op.m())
    throw std::invalid_argument("theta: dimension mismatch");
  return evaluate(g, op, b, y).theta;
}

Vector grad_theta(const Matrix& g, const AffineOperator& op, const Vector& b, const Vector& y) {
  if (g.rows() != op.n() || g.cols() != op.n())
    throw std::invalid_argument("grad_theta: dimension mismatch");
  if (y.size() != op.m() || b.size() != op.m())
    throw std::invalid_argument("grad_theta: dimension mismatch");
  return evaluate(g, op, b, y).grad;
}

Vector vy_apply(const DualState& state, const AffineOperator& op, const Vector& h, double eps) {
  if (h.size() != op.m()) throw std::invalid_argument("vy_apply: dimension mismatch");
  JacobianOperator vop{op, state.decomposition,
                       build_mask(state.decomposition, state.alpha, state.beta, state.gamma), eps};
  return vop.apply(h);
}

ProxResult psd_affine_project(const Matrix& g, const AffineOperator& op, const Vector& b,
                              const ProxXParams& params, const Vector& y_warm) {
  params.validate();
  if (g.rows() != op.n() || g.cols() != op.n())
    throw std::invalid_argument("psd_affine_project: dimension mismatch");
  if (b.size() != op.m())
    throw std::invalid_argument("psd_affine_project: rhs dimension mismatch");

  ProxResult res;
  const Index m = op.m();
  if (m == 0) {
    res.x = psd_project(g);
    res.y = Vector();
    return res;
  }

  Vector y0 = y_warm.size() == m ? y_warm : Vector::Zero(m);
  DualPoint cur = evaluate(g, op, b, y0);
  const int max_cg = params.max_cg_iters > 0 ? params.max_cg_iters : 5 * static_cast<int>(m);

  while (cur.grad.norm() > params.newton_tol) {
    if (res.stats.newton_iters >= params.max_newton_iters) {
      throw NonConvergence("psd_affine_project: Newton iteration budget exhausted",
                           cur.positive_part(), cur.y, cur.grad.norm());
    }
    ++res.stats.newton_iters;

    std::vector<int> alpha, beta, gamma;
    partition_by_sign(cur.dec, alpha, beta, gamma);
    const double grad_norm = cur.grad.norm();
    JacobianOperator vop{op, cur.dec, build_mask(cur.dec, alpha, beta, gamma),
                         params.jacobian_eps * (1.0 + grad_norm)};

    // inexact Newton forcing sequence for superlinear local behavior
    const double cg_tol = std::min(params.cg_tol_factor, std::sqrt(grad_norm));
    Vector d = conjugate_gradient(vop, cur.grad, cg_tol, max_cg, res.stats.cg_iters);
    double slope = cur.grad.dot(d);
    if (!(slope < 0)) {  // fall back to steepest descent
      d = -cur.grad;
      slope = cur.grad.dot(d);
    }

    double step = 1.0;
    int backtracks = 0;
    // absolute fuzz keeps roundoff in theta from stalling the search near the optimum
    const double fuzz = 1e-14 * (1.0 + std::abs(cur.theta));
    DualPoint trial = evaluate(g, op, b, cur.y + step * d);
    while (trial.theta - cur.theta > params.armijo_sigma * step * slope + fuzz) {
      if (++backtracks > kMaxBacktracks)
        throw StallError("psd_affine_project: line search stalled after 50 backtracks");
      step *= params.backtrack_rho;
      trial = evaluate(g, op, b, cur.y + step * d);
    }
    res.stats.backtracks += backtracks;
    cur = std::move(trial);

    if (cur.y.norm() > kDualDivergenceNorm)
      throw InfeasibleError("psd_affine_project: dual iterates diverged; constraints likely infeasible");
  }

  res.stats.final_grad_norm = cur.grad.norm();
  res.x = cur.positive_part();
  res.y = cur.y;
  return res;
}

ProxResult prox_x_solve(const Matrix& x_tilde, const AffineOperator& op, const Vector& b,
                        double c_k, double rho_x, const ProxXParams& params,
                        const Vector& y_warm) {
  if (!(c_k > 0)) throw std::invalid_argument("prox_x_solve: c_k must be > 0");
  if (rho_x < 0) throw std::invalid_argument("prox_x_solve: rho_x must be >= 0");
  const Matrix g = (c_k / (c_k + rho_x)) * symmetrized(x_tilde);
  return psd_affine_project(g, op, b, params, y_warm);
}

}  // namespace rankmin
