#include "rankmin/affine_operator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace rankmin {

AffineOperator::AffineOperator(Index n, std::vector<SparseSym> coeffs, Vector rhs)
    : n_(n), coeffs_(std::move(coeffs)), rhs_(std::move(rhs)) {
  if (n_ < 1) throw std::invalid_argument("AffineOperator: n must be >= 1");
  if (rhs_.size() != static_cast<Index>(coeffs_.size()))
    throw std::invalid_argument("AffineOperator: rhs length does not match constraint count");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    auto& c = coeffs_[i];
    for (auto& t : c) {
      if (t.row < 0 || t.col < 0 || t.row >= n_ || t.col >= n_)
        throw std::invalid_argument("AffineOperator: triple index out of range in constraint " +
                                    std::to_string(i));
      if (t.row > t.col) std::swap(t.row, t.col);
    }
    std::sort(c.begin(), c.end(),
              [](const Triple& a, const Triple& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    auto dup = std::adjacent_find(c.begin(), c.end(), [](const Triple& a, const Triple& b) {
      return a.row == b.row && a.col == b.col;
    });
    if (dup != c.end())
      throw std::invalid_argument("AffineOperator: duplicate (row,col) in constraint " +
                                  std::to_string(i));
  }
}

Vector AffineOperator::apply(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_)
    throw std::invalid_argument("AffineOperator::apply: dimension mismatch");
  Vector out(m());
  for (Index i = 0; i < m(); ++i) {
    double acc = 0.0;
    for (const auto& t : coeffs_[i]) {
      // off-diagonal triples carry the mirrored entry
      acc += (t.row == t.col ? t.value : 2.0 * t.value) * x(t.row, t.col);
    }
    out[i] = acc;
  }
  return out;
}

Matrix AffineOperator::adjoint(const Vector& y) const {
  Matrix out = Matrix::Zero(n_, n_);
  adjoint_into(y, out);
  return out;
}

void AffineOperator::adjoint_into(const Vector& y, Matrix& out) const {
  if (y.size() != m()) throw std::invalid_argument("AffineOperator::adjoint: dimension mismatch");
  if (out.rows() != n_ || out.cols() != n_) out.resize(n_, n_);
  out.setZero();
  for (Index i = 0; i < m(); ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (const auto& t : coeffs_[i]) {
      out(t.row, t.col) += yi * t.value;
      if (t.row != t.col) out(t.col, t.row) += yi * t.value;
    }
  }
}

}  // namespace rankmin
