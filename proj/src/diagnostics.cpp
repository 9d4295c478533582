#include "rankmin/diagnostics.hpp"

#include <cmath>

#include "rankmin/box_projection.hpp"
#include "rankmin/spectral.hpp"

namespace rankmin {

Matrix certificate_u(const Matrix& x, double zero_threshold) {
  auto dec = eig_sym(x);
  const Index n = dec.values.size();
  Matrix u = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (dec.values[i] <= zero_threshold)
      u.noalias() += dec.vectors.col(i) * dec.vectors.col(i).transpose();
  }
  return symmetrized(u);
}

std::pair<double, double> stationarity_residuals(const Matrix& x, const Matrix& u,
                                                 const AffineOperator& op, double rho,
                                                 double rho_x, const ProxXParams& prox_params) {
  // X is stationary iff it is fixed under one prox-gradient step at unit weight
  Matrix x_target = x - rho * u;
  ProxResult px = prox_x_solve(x_target, op, op.rhs(), 1.0, rho_x, prox_params, Vector());
  const double res_x = (x - px.x).norm();

  Matrix u_target = u - rho * x;
  Matrix pu = prox_u_solve(u_target, 1.0);
  const double res_u = (u - pu).norm();
  return {res_x, res_u};
}

std::vector<EigenpairCheck> eigenpair_property_check(const Matrix& x, const Matrix& u, double rho,
                                                     double tol) {
  auto dec = eig_sym(u);
  const Index n = dec.values.size();
  const double bound = 1.0 / rho;
  std::vector<EigenpairCheck> report(n);

  // group indices whose sigma agree within tol into one eigenspace
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && std::abs(dec.values[stop] - dec.values[start]) <= tol) ++stop;
    const Index dim = stop - start;

    const double sigma = dec.values[start];
    EigenpairClass cls = EigenpairClass::Interior;
    if (std::abs(sigma - 1.0) <= tol)
      cls = EigenpairClass::AtOne;
    else if (std::abs(sigma) <= tol)
      cls = EigenpairClass::AtZero;

    // compression of X onto the eigenspace; basis-independent spectrum
    Matrix basis = dec.vectors.middleCols(start, dim);
    Matrix comp = symmetrized(basis.transpose() * x * basis);
    auto comp_dec = eig_sym(comp);
    const double lam_max = comp_dec.values[0];
    const double lam_min = comp_dec.values[dim - 1];

    bool ok = false;
    switch (cls) {
      case EigenpairClass::AtOne:
        ok = lam_max <= bound + tol;
        break;
      case EigenpairClass::AtZero:
        ok = lam_min >= bound - tol;
        break;
      case EigenpairClass::Interior:
        ok = std::abs(lam_max - bound) <= tol && std::abs(lam_min - bound) <= tol;
        break;
    }
    for (Index i = start; i < stop; ++i) {
      report[i].sigma = dec.values[i];
      report[i].vxv = dec.vectors.col(i).dot(x * dec.vectors.col(i));
      report[i].classification = cls;
      report[i].satisfied = ok;
    }
    start = stop;
  }
  return report;
}

DiagnosticsReport make_diagnostics(const Matrix& x, const Matrix& u, const AffineOperator& op,
                                   double rho, double rho_x, const ProxXParams& prox_params,
                                   double rank_threshold, double eigenpair_tol) {
  DiagnosticsReport rep;
  rep.complementarity = frobenius_inner(x, u);
  rep.rank_x = rank_above(x, rank_threshold);
  rep.trace_u = u.trace();
  auto [rx, ru] = stationarity_residuals(x, u, op, rho, rho_x, prox_params);
  rep.stat_res_x = rx;
  rep.stat_res_u = ru;
  rep.eigenpair_report = eigenpair_property_check(x, u, rho, eigenpair_tol);
  return rep;
}

}  // namespace rankmin
