#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cda/assembly.hpp"

namespace cda {

/// L² projection: solves M g = (source, φi) on the full target space.
FeFunction l2_project(const ScalarField& source, FeSpacePtr target);

/// Point samples of a field, (location, value).
using NodeSamples = std::vector<std::pair<Point, double>>;

/// Degree-2 interpolant on the coarse_n mesh whose dof values are the given
/// samples. Every node of the (2*coarse_n+1)^2 lattice must be present
/// (matched to 1e-9); a missing node throws std::invalid_argument naming it.
FeFunction lagrange_interpolate(const NodeSamples& samples, int coarse_n);

/// Evaluates `f` at the dof nodes of `space`.
FeFunction nodal_interpolate(const ScalarField& f, FeSpacePtr space);

/// Samples `f` at the dof nodes of `space`, in dof order.
NodeSamples sample_at_nodes(const ScalarField& f, const FeSpace& space);

/// Integrand callback: triangle index, barycentric point, physical point.
using ElementIntegrand =
    std::function<double(int t, const std::array<double, 3>& bary, const Point& x)>;

/// ∫Ω integrand with the given quadrature degree on `mesh`.
double integrate(const Mesh& mesh, const ElementIntegrand& integrand,
                 int quadrature_degree = 6);

double l2_norm(const FeFunction& g);
double l2_norm(const ScalarField& g, const Mesh& mesh);
double h1_seminorm(const FeFunction& g);

/// ‖g1 − g2‖ by degree-6 quadrature on the finer of the two meshes.
double l2_distance(const FeFunction& g1, const FeFunction& g2);
/// ‖g − field‖ by degree-6 quadrature on `mesh`.
double l2_distance(const FeFunction& g, const ScalarField& field, const Mesh& mesh);

/// E[k][j] = φj(points[k]): maps coefficients on `space` to point values.
SparseMatrix evaluation_matrix(const FeSpace& space, const std::vector<Point>& points);

/// Dof nodes of `space`, in dof order.
std::vector<Point> dof_points(const FeSpace& space);

Point map_to_physical(const Mesh& mesh, int t, const std::array<double, 3>& bary);

}  // namespace cda
