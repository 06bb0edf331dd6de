#pragma once

#include <memory>

#include "cda/assembly.hpp"

namespace cda {

inline constexpr double kDefaultSolveTolerance = 1e-10;

/// Sparse direct factorization (UMFPACK when available, otherwise Eigen's
/// SparseLU) with a relative-residual acceptance check on every solve.
/// Factor once, solve many: used wherever the operator is fixed across
/// right-hand sides.
class LinearSolver {
 public:
  explicit LinearSolver(const SparseMatrix& A, double tolerance = kDefaultSolveTolerance);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Throws SolverFailure carrying the achieved relative residual.
  Vector solve(const Vector& rhs) const;

  static const char* backend_name();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// ‖A x − rhs‖ / ‖rhs‖ ≤ tolerance or SolverFailure.
Vector solve_linear(const SparseMatrix& A, const Vector& rhs,
                    double tolerance = kDefaultSolveTolerance);

}  // namespace cda
