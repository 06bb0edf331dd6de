#include "cda/assembly.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cda/errors.hpp"
#include "cda/quadrature.hpp"

namespace cda {
namespace {

using Triplet = Eigen::Triplet<double>;

Point map_point(const Mesh& mesh, int t, const std::array<double, 3>& l) {
  const auto& tri = mesh.triangles()[t];
  const Point& a = mesh.vertices()[tri[0]];
  const Point& b = mesh.vertices()[tri[1]];
  const Point& c = mesh.vertices()[tri[2]];
  return {l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y};
}

double eval(const ScalarField& f, const Point& p, const char* name) {
  const double v = f(p);
  if (!std::isfinite(v)) {
    throw EvaluationError(std::string("field '") + name + "' is not finite at (" +
                          std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
  }
  return v;
}

SparseMatrix from_triplets(int n, std::vector<Triplet>& trips) {
  SparseMatrix A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

}  // namespace

ScalarField constant_field(double value) {
  return [value](const Point&) { return value; };
}

VectorField constant_vector_field(double bx, double by) {
  return {constant_field(bx), constant_field(by)};
}

SparseMatrix assemble_operator_raw(const FeSpace& space, const ScalarField& q,
                                   const VectorField& b, const ScalarField& c, double mass_scale) {
  const Mesh& mesh = space.mesh();
  const auto& rule = triangle_rule(kAssemblyQuadratureDegree);
  const int nl = space.dofs_per_element();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.num_triangles()) * nl * nl);

  std::array<double, 6> phi;
  std::array<Vec2, 6> dphi;
  Eigen::Matrix<double, 6, 6> K;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto geo = triangle_geometry(mesh, t);
    K.setZero();
    for (int k = 0; k < rule.size(); ++k) {
      const auto& l = rule.points[k];
      const Point x = map_point(mesh, t, l);
      const double w = rule.weights[k] * geo.area;
      const double qv = eval(q, x, "q");
      const Vec2 bv(eval(b.x, x, "b1"), eval(b.y, x, "b2"));
      const double cv = eval(c, x, "c") + mass_scale;
      space.shape_values(l, std::span<double>(phi.data(), nl));
      space.shape_gradients(geo, l, std::span<Vec2>(dphi.data(), nl));
      for (int i = 0; i < nl; ++i) {
        const double bdi = bv.dot(dphi[i]);
        for (int j = 0; j < nl; ++j) {
          K(i, j) += w * (qv * dphi[j].dot(dphi[i]) - phi[j] * bdi + cv * phi[j] * phi[i]);
        }
      }
    }
    const auto dofs = space.element_dofs(t);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) trips.emplace_back(dofs[i], dofs[j], K(i, j));
  }
  return from_triplets(space.num_dofs(), trips);
}

SparseMatrix assemble_operator(const FeSpace& space, const ScalarField& q, const VectorField& b,
                               const ScalarField& c, double mass_scale) {
  SparseMatrix A = assemble_operator_raw(space, q, b, c, mass_scale);
  apply_dirichlet(A, space);
  return A;
}

Vector assemble_load(const FeSpace& space, const ScalarField& f, bool zero_boundary) {
  const Mesh& mesh = space.mesh();
  const auto& rule = triangle_rule(kAssemblyQuadratureDegree);
  const int nl = space.dofs_per_element();
  Vector L = Vector::Zero(space.num_dofs());
  std::array<double, 6> phi;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.signed_area(t);
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < rule.size(); ++k) {
      const auto& l = rule.points[k];
      const double fv = eval(f, map_point(mesh, t, l), "f");
      space.shape_values(l, std::span<double>(phi.data(), nl));
      const double w = rule.weights[k] * area * fv;
      for (int i = 0; i < nl; ++i) L[dofs[i]] += w * phi[i];
    }
  }
  if (zero_boundary) {
    for (int d : space.boundary_dofs()) L[d] = 0.0;
  }
  return L;
}

SparseMatrix assemble_mass(const FeSpace& space) {
  const auto zero = constant_field(0.0);
  return assemble_operator_raw(space, zero, {zero, zero}, zero, 1.0);
}

SparseMatrix assemble_mixed_mass(const FeSpace& fine, const FeSpace& coarse) {
  const Mesh& fm = fine.mesh();
  const Mesh& cm = coarse.mesh();
  const auto& rule = triangle_rule(kAssemblyQuadratureDegree);
  const int nf = fine.dofs_per_element();
  const int nc = coarse.dofs_per_element();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(fm.num_triangles()) * nf * nc);
  std::array<double, 6> phi;
  std::array<double, 6> psi;
  for (int t = 0; t < fm.num_triangles(); ++t) {
    const double area = fm.signed_area(t);
    const auto fdofs = fine.element_dofs(t);
    // The coarse triangle is fixed by the fine centroid when meshes nest.
    const Point centroid = map_point(fm, t, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const int ct = locate_element(cm, centroid).triangle;
    const auto cdofs = coarse.element_dofs(ct);
    for (int k = 0; k < rule.size(); ++k) {
      const auto& l = rule.points[k];
      const Point x = map_point(fm, t, l);
      fine.shape_values(l, std::span<double>(phi.data(), nf));
      coarse.shape_values(barycentric(cm, ct, x), std::span<double>(psi.data(), nc));
      const double w = rule.weights[k] * area;
      for (int i = 0; i < nf; ++i)
        for (int a = 0; a < nc; ++a) trips.emplace_back(fdofs[i], cdofs[a], w * phi[i] * psi[a]);
    }
  }
  SparseMatrix B(fine.num_dofs(), coarse.num_dofs());
  B.setFromTriplets(trips.begin(), trips.end());
  B.makeCompressed();
  return B;
}

void apply_dirichlet(SparseMatrix& A, const FeSpace& space) {
  for (int col = 0; col < A.outerSize(); ++col) {
    const bool bcol = space.is_boundary_dof(col);
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
      const bool brow = space.is_boundary_dof(static_cast<int>(it.row()));
      if (bcol || brow) it.valueRef() = (it.row() == col) ? 1.0 : 0.0;
    }
  }
  A.prune(0.0);
}

}  // namespace cda
