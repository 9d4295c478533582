#include "rankmin/trace_baseline.hpp"

#include <stdexcept>

namespace rankmin {

ProxResult trace_min_solve(const AffineOperator& op, const Vector& b, double mu,
                           const ProxXParams& params) {
  if (!(mu > 0)) throw std::invalid_argument("trace_min_solve: mu must be > 0");
  const Matrix g = -(1.0 / mu) * Matrix::Identity(op.n(), op.n());
  return psd_affine_project(g, op, b, params, Vector());
}

}  // namespace rankmin
