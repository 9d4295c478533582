#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

#include "rankmin/errors.hpp"
#include "rankmin/types.hpp"

// Spectral primitives on dense symmetric matrices. Everything here is a pure
// function of its inputs; symmetry is restored by averaging (M + M^T)/2 before
// any eigendecomposition so that accumulated arithmetic noise cannot leak into
// the solvers.

namespace rankmin {

template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetrized: matrix not square");
  return ((m + m.transpose()) / 2).eval();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_inner(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frobenius_inner: dimension mismatch");
  return a.cwiseProduct(b).sum();
}

// Eigenvalues sorted descending, columns of `vectors` paired with them.
template <typename Scalar>
struct EigenDecomposition {
  VectorX<Scalar> values;
  MatrixX<Scalar> vectors;

  MatrixX<Scalar> reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
  }
};

template <typename Derived>
EigenDecomposition<typename Derived::Scalar> eig_sym(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (!m.allFinite()) throw std::invalid_argument("eig_sym: non-finite entries");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(symmetrized(m));
  if (solver.info() != Eigen::Success) throw EigFailure("eig_sym: eigensolver did not converge");
  EigenDecomposition<Scalar> dec;
  dec.values = solver.eigenvalues().reverse();
  dec.vectors = solver.eigenvectors().rowwise().reverse();
  return dec;
}

// Rebuild a symmetric matrix after transforming the spectrum in place.
template <typename Scalar, typename Fn>
MatrixX<Scalar> map_spectrum(const EigenDecomposition<Scalar>& dec, Fn&& fn) {
  VectorX<Scalar> mapped = dec.values.unaryExpr(std::forward<Fn>(fn));
  return symmetrized(dec.vectors * mapped.asDiagonal() * dec.vectors.transpose());
}

// Projection onto the positive semidefinite cone: zero out negative eigenvalues.
template <typename Derived>
MatrixX<typename Derived::Scalar> psd_project(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  auto dec = eig_sym(m);
  return map_spectrum(dec, [](Scalar v) { return v > Scalar(0) ? v : Scalar(0); });
}

// Clamp all eigenvalues into [lo, hi], keeping eigenvectors.
template <typename Derived>
MatrixX<typename Derived::Scalar> clamp_spectrum(const Eigen::MatrixBase<Derived>& m,
                                                 typename Derived::Scalar lo,
                                                 typename Derived::Scalar hi) {
  using Scalar = typename Derived::Scalar;
  if (lo > hi) throw std::invalid_argument("clamp_spectrum: lo > hi");
  auto dec = eig_sym(m);
  return map_spectrum(dec, [lo, hi](Scalar v) { return std::min(hi, std::max(lo, v)); });
}

// Number of eigenvalues strictly above `threshold` -- the rank measurement
// convention used throughout (threshold 0.01 for reported ranks).
template <typename Derived>
int rank_above(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar threshold) {
  using Scalar = typename Derived::Scalar;
  if (!(threshold > Scalar(0))) throw std::invalid_argument("rank_above: threshold must be > 0");
  auto dec = eig_sym(m);
  return static_cast<int>((dec.values.array() > threshold).count());
}

}  // namespace rankmin
