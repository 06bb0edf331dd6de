#include "cda/linear_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cda/errors.hpp"

#ifdef CDA_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#endif

namespace cda {

#ifdef CDA_HAVE_UMFPACK
using Factorization = Eigen::UmfPackLU<SparseMatrix>;
#else
using Factorization = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
#endif

struct LinearSolver::Impl {
  SparseMatrix A;
  Factorization lu;
  double tolerance;
  bool ok = false;
};

LinearSolver::LinearSolver(const SparseMatrix& A, double tolerance)
    : impl_(std::make_unique<Impl>()) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("linear solve needs a square matrix");
  }
  impl_->A = A;
  impl_->A.makeCompressed();
  impl_->tolerance = tolerance;
  impl_->lu.compute(impl_->A);
  impl_->ok = impl_->lu.info() == Eigen::Success;
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

Vector LinearSolver::solve(const Vector& rhs) const {
  if (rhs.size() != impl_->A.rows()) {
    throw std::invalid_argument("right-hand side length " + std::to_string(rhs.size()) +
                                " does not match matrix dimension " +
                                std::to_string(impl_->A.rows()));
  }
  const double bnorm = rhs.norm();
  if (bnorm == 0.0 && impl_->ok) return Vector::Zero(rhs.size());
  if (!impl_->ok) {
    throw SolverFailure("sparse factorization failed (singular or ill-posed system)",
                        std::numeric_limits<double>::infinity());
  }
  Vector x = impl_->lu.solve(rhs);
  double res = (impl_->A * x - rhs).norm() / bnorm;
  // One step of iterative refinement recovers digits lost to pivoting.
  if (!(res <= impl_->tolerance) && std::isfinite(res)) {
    x += impl_->lu.solve(Vector(rhs - impl_->A * x));
    res = (impl_->A * x - rhs).norm() / bnorm;
  }
  if (!(res <= impl_->tolerance)) {
    throw SolverFailure("linear solve reached relative residual " + std::to_string(res) +
                            " > tolerance " + std::to_string(impl_->tolerance),
                        res);
  }
  return x;
}

const char* LinearSolver::backend_name() {
#ifdef CDA_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

Vector solve_linear(const SparseMatrix& A, const Vector& rhs, double tolerance) {
  return LinearSolver(A, tolerance).solve(rhs);
}

}  // namespace cda
