#pragma once

#include <utility>
#include <vector>

#include "rankmin/affine_operator.hpp"
#include "rankmin/newton_projection.hpp"
#include "rankmin/types.hpp"

// Solution-quality instrumentation: complementarity, thresholded rank, prox
// fixed-point residuals, and the per-eigenpair stationarity property of the
// penalty formulation.

namespace rankmin {

enum class EigenpairClass { AtOne, AtZero, Interior };

struct EigenpairCheck {
  double sigma = 0.0;          // eigenvalue of U
  double vxv = 0.0;            // v' X v for the paired eigenvector
  EigenpairClass classification = EigenpairClass::Interior;
  bool satisfied = false;
};

struct DiagnosticsReport {
  double complementarity = 0.0;  // <X, U>
  int rank_x = 0;
  double trace_u = 0.0;
  double stat_res_x = 0.0;
  double stat_res_u = 0.0;
  std::vector<EigenpairCheck> eigenpair_report;
};

// Rank certificate of a PSD matrix: the projector onto the span of
// eigenvectors with eigenvalue <= zero_threshold, so that
// n - trace(U) = rank_above(X, zero_threshold).
Matrix certificate_u(const Matrix& x, double zero_threshold);

// Fixed-point residuals of the two prox maps at unit weights. Both vanish
// exactly at PALM stationary points of the penalty objective.
std::pair<double, double> stationarity_residuals(const Matrix& x, const Matrix& u,
                                                 const AffineOperator& op, double rho,
                                                 double rho_x, const ProxXParams& prox_params);

// Checks v' X v against 1/rho for each eigenpair (sigma, v) of U:
//   sigma at 1  ->  v'Xv <= 1/rho,  sigma at 0  ->  v'Xv >= 1/rho,
//   interior    ->  v'Xv  = 1/rho.
// Repeated eigenvalues are handled per eigenspace (the condition constrains
// the whole compression of X onto the eigenspace), which makes pass/fail
// independent of the basis the eigensolver happens to return.
std::vector<EigenpairCheck> eigenpair_property_check(const Matrix& x, const Matrix& u, double rho,
                                                     double tol = 1e-6);

DiagnosticsReport make_diagnostics(const Matrix& x, const Matrix& u, const AffineOperator& op,
                                   double rho, double rho_x, const ProxXParams& prox_params,
                                   double rank_threshold, double eigenpair_tol = 1e-6);

}  // namespace rankmin
