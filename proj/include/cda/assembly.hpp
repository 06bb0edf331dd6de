#pragma once

#include <Eigen/SparseCore>

#include <functional>

#include "cda/fe_space.hpp"

namespace cda {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Point&)>;

struct VectorField {
  ScalarField x;
  ScalarField y;
};

ScalarField constant_field(double value);
VectorField constant_vector_field(double bx, double by);

/// Weak form of  -div(q grad u) + div(b u) + c u + s u  with the convection
/// term integrated by parts against test functions vanishing on the boundary:
///   A[i][j] = ∫ q ∇φj·∇φi - φj b·∇φi + c φj φi + s φj φi.
/// Rows and columns of boundary dofs are replaced by the identity.
SparseMatrix assemble_operator(const FeSpace& space, const ScalarField& q, const VectorField& b,
                               const ScalarField& c, double mass_scale);

/// Same form without the Dirichlet replacement.
SparseMatrix assemble_operator_raw(const FeSpace& space, const ScalarField& q,
                                   const VectorField& b, const ScalarField& c, double mass_scale);

/// L[i] = ∫ f φi, boundary entries zeroed unless `zero_boundary` is false.
Vector assemble_load(const FeSpace& space, const ScalarField& f, bool zero_boundary = true);

/// Consistent mass matrix, no boundary treatment.
SparseMatrix assemble_mass(const FeSpace& space);

/// B[i][a] = ∫ φi ψa with φ from `fine` and ψ from `coarse`; integrated on the
/// fine mesh, so it is exact whenever every fine triangle lies inside a
/// coarse one (nested uniform meshes).
SparseMatrix assemble_mixed_mass(const FeSpace& fine, const FeSpace& coarse);

/// Rows and columns of boundary dofs → identity.
void apply_dirichlet(SparseMatrix& A, const FeSpace& space);

}  // namespace cda
