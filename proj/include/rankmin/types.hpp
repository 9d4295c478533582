#pragma once

#include <Eigen/Dense>

namespace rankmin {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

}  // namespace rankmin
