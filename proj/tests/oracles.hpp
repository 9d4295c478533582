#pragma once

#include "rankmin/affine_operator.hpp"
#include "rankmin/types.hpp"

// Independent oracles used to freeze expected values. These deliberately avoid
// the dual Newton path and the closed-form U update: the projection oracle is
// Dykstra's alternating projection scheme, the box oracle is plain projected
// gradient descent.

namespace rankmin::oracle {

// Orthogonal projection onto the affine subspace {A(X) = b} alone.
Matrix affine_project(const Matrix& x, const AffineOperator& op, const Vector& b);

// Projection of g onto {A(X) = b, X PSD} by Dykstra's algorithm.
Matrix dykstra_project(const Matrix& g, const AffineOperator& op, const Vector& b,
                       double tol = 1e-11, int max_iters = 300000);

// argmin -tr(U) + (d/2)||U - u_tilde||^2 over {0 <= U <= I} by projected
// gradient descent.
Matrix box_prox_pg(const Matrix& u_tilde, double d, double tol = 1e-13,
                   int max_iters = 100000);

}  // namespace rankmin::oracle
