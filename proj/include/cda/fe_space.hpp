#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "cda/mesh.hpp"

namespace cda {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;

/// Constant per-triangle data: area and barycentric gradients.
struct TriangleGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad_lambda;
};

TriangleGeometry triangle_geometry(const Mesh& mesh, int t);

/// Continuous Lagrange space of degree 1 or 2 on a uniform mesh.
///
/// Degree-k dofs sit on the (k*n+1)^2 lattice of spacing h/k (for k = 2 the
/// vertices plus all edge midpoints, including the cell diagonals), numbered
/// row by row: dof = J*(k*n+1) + I for the node (I/(k*n), J/(k*n)).
/// Local order per triangle: vertices 0,1,2 then midpoints of edges 01, 12, 20.
class FeSpace {
 public:
  FeSpace(MeshPtr mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int lattice_n() const { return degree_ * mesh_->n(); }
  int num_dofs() const { return (lattice_n() + 1) * (lattice_n() + 1); }
  int dofs_per_element() const { return degree_ == 1 ? 3 : 6; }

  std::span<const int> element_dofs(int t) const {
    return {cell_dofs_.data() + static_cast<size_t>(t) * dofs_per_element(),
            static_cast<size_t>(dofs_per_element())};
  }

  Point dof_point(int dof) const;
  bool is_boundary_dof(int dof) const { return boundary_[dof] != 0; }
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
  const std::vector<int>& interior_dofs() const { return interior_dofs_; }

  /// Reference shape functions at barycentric point `bary`; `out` has
  /// dofs_per_element() entries.
  void shape_values(const std::array<double, 3>& bary, std::span<double> out) const;
  void shape_gradients(const TriangleGeometry& g, const std::array<double, 3>& bary,
                       std::span<Vec2> out) const;
  /// Second derivatives; only meaningful for degree 2 (zero for degree 1).
  void shape_hessians(const TriangleGeometry& g, std::span<Mat2> out) const;

 private:
  MeshPtr mesh_;
  int degree_;
  std::vector<int> cell_dofs_;
  std::vector<char> boundary_;
  std::vector<int> boundary_dofs_;
  std::vector<int> interior_dofs_;
};

using FeSpacePtr = std::shared_ptr<const FeSpace>;

FeSpacePtr make_space(MeshPtr mesh, int degree);
FeSpacePtr make_space(int n, int degree);

/// Coefficient vector over an FeSpace.
class FeFunction {
 public:
  explicit FeFunction(FeSpacePtr space);
  FeFunction(FeSpacePtr space, Vector coefficients);

  const FeSpace& space() const { return *space_; }
  const FeSpacePtr& space_ptr() const { return space_; }
  const Vector& coefficients() const { return coeffs_; }
  Vector& coefficients() { return coeffs_; }

  double value(Point p) const;
  Vec2 gradient(Point p) const;

  double value(int t, const std::array<double, 3>& bary) const;
  Vec2 gradient(int t, const std::array<double, 3>& bary) const;
  /// Elementwise Hessian (constant on each triangle for degree 2).
  Mat2 hessian(int t) const;

  double operator()(Point p) const { return value(p); }

 private:
  FeSpacePtr space_;
  Vector coeffs_;
};

/// "degree n" header line followed by one coefficient per line, written with
/// max_digits10 so that load_fe_function reproduces the values bit-exactly.
void dump_fe_function(std::ostream& os, const FeFunction& f);
FeFunction load_fe_function(std::istream& is);

}  // namespace cda
