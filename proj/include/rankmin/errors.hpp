#pragma once

#include <stdexcept>
#include <string>

#include "rankmin/types.hpp"

namespace rankmin {

// Base for all solver-level failures (as opposed to precondition violations,
// which throw std::invalid_argument).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Newton loop exceeded its iteration budget. Carries the best iterate found.
class NonConvergence : public SolverError {
 public:
  NonConvergence(const std::string& what, Matrix x, Vector y, double grad_norm)
      : SolverError(what),
        best_x(std::move(x)),
        best_y(std::move(y)),
        best_grad_norm(grad_norm) {}

  Matrix best_x;
  Vector best_y;
  double best_grad_norm;
};

// Armijo line search could not make progress.
class StallError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Dual iterates diverged; the set {A(X)=b, X PSD} is (numerically) empty.
class InfeasibleError : public SolverError {
 public:
  using SolverError::SolverError;
};

class EigFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

// Instance file could not be parsed. Carries line number context.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_number(line) {}

  int line_number;
};

}  // namespace rankmin
