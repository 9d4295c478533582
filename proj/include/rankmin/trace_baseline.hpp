#pragma once

#include "rankmin/affine_operator.hpp"
#include "rankmin/newton_projection.hpp"
#include "rankmin/types.hpp"

namespace rankmin {

// Convex-relaxation baseline: minimize trace(X) + (mu/2)||X||_F^2 over
// {A(X)=b, X PSD}. Completing the square turns this into the projection of
// -(1/mu) I, so it reuses the dual Newton projection. Small mu approaches a
// minimal-trace (nuclear norm, for PSD matrices) solution.
ProxResult trace_min_solve(const AffineOperator& op, const Vector& b, double mu,
                           const ProxXParams& params);

}  // namespace rankmin
