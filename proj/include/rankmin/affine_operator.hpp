#pragma once

#include <vector>

#include "rankmin/types.hpp"

namespace rankmin {

// One entry of a sparse symmetric coefficient matrix. Off-diagonal entries
// (row < col) stand for the pair (row,col) and (col,row); the mirrored value is
// implicit, so <A, X> picks up 2*value*X(row,col) for them.
struct Triple {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

using SparseSym = std::vector<Triple>;

// The affine constraint system A(X) = b: m sparse symmetric coefficient
// matrices A_i plus the right-hand side. A and its adjoint A* are the only
// interface the solvers have to the constraints.
class AffineOperator {
 public:
  AffineOperator() = default;

  // Triples are normalized to row <= col and sorted; duplicate (row,col)
  // entries within one constraint are rejected.
  AffineOperator(Index n, std::vector<SparseSym> coeffs, Vector rhs);

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(coeffs_.size()); }
  const std::vector<SparseSym>& coeffs() const { return coeffs_; }
  const Vector& rhs() const { return rhs_; }

  // y_i = <A_i, X>
  Vector apply(const Matrix& x) const;

  // sum_i y_i A_i as a dense symmetric matrix
  Matrix adjoint(const Vector& y) const;

  // adjoint accumulated into `out` (must be n x n); avoids reallocation in
  // inner solver loops
  void adjoint_into(const Vector& y, Matrix& out) const;

  friend bool operator==(const AffineOperator&, const AffineOperator&) = default;

 private:
  Index n_ = 0;
  std::vector<SparseSym> coeffs_;
  Vector rhs_;
};

}  // namespace rankmin
