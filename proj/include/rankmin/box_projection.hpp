#pragma once

#include <stdexcept>

#include "rankmin/spectral.hpp"
#include "rankmin/types.hpp"

namespace rankmin {

// Closed-form U update: the minimizer of
//   n - <I, U> + (d_k/2) ||U - Utilde||_F^2   over  0 <= U <= I
// is the spectral box projection of Utilde + (1/d_k) I.
template <typename Derived>
MatrixX<typename Derived::Scalar> prox_u_solve(const Eigen::MatrixBase<Derived>& u_tilde,
                                               typename Derived::Scalar d_k) {
  using Scalar = typename Derived::Scalar;
  if (!(d_k > Scalar(0))) throw std::invalid_argument("prox_u_solve: d_k must be > 0");
  MatrixX<Scalar> shifted = u_tilde;
  shifted.diagonal().array() += Scalar(1) / d_k;
  return clamp_spectrum(shifted, Scalar(0), Scalar(1));
}

}  // namespace rankmin
