#include "cda/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cda/linear_solver.hpp"
#include "cda/quadrature.hpp"

namespace cda {

Point map_to_physical(const Mesh& mesh, int t, const std::array<double, 3>& l) {
  const auto& tri = mesh.triangles()[t];
  const Point& a = mesh.vertices()[tri[0]];
  const Point& b = mesh.vertices()[tri[1]];
  const Point& c = mesh.vertices()[tri[2]];
  return {l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y};
}

FeFunction l2_project(const ScalarField& source, FeSpacePtr target) {
  const FeSpace& space = *target;
  const Mesh& mesh = space.mesh();
  const auto& rule = triangle_rule(kNormQuadratureDegree);
  const int nl = space.dofs_per_element();
  Vector rhs = Vector::Zero(space.num_dofs());
  std::array<double, 6> phi;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.signed_area(t);
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < rule.size(); ++k) {
      const auto& l = rule.points[k];
      const double w = rule.weights[k] * area * source(map_to_physical(mesh, t, l));
      space.shape_values(l, std::span<double>(phi.data(), nl));
      for (int i = 0; i < nl; ++i) rhs[dofs[i]] += w * phi[i];
    }
  }
  const SparseMatrix M = assemble_mass(space);
  return FeFunction(std::move(target), solve_linear(M, rhs, 1e-13));
}

FeFunction lagrange_interpolate(const NodeSamples& samples, int coarse_n) {
  auto space = make_space(coarse_n, 2);
  const int ln = space->lattice_n();
  const int stride = ln + 1;
  Vector c(space->num_dofs());
  std::vector<char> seen(space->num_dofs(), 0);
  for (const auto& [p, v] : samples) {
    const double I = p.x * ln;
    const double J = p.y * ln;
    const long Ir = std::lround(I);
    const long Jr = std::lround(J);
    if (std::abs(I - Ir) > 1e-9 * std::max(1, ln) || std::abs(J - Jr) > 1e-9 * std::max(1, ln) ||
        Ir < 0 || Jr < 0 || Ir > ln || Jr > ln) {
      continue;  // not an interpolation node
    }
    const int d = static_cast<int>(Jr * stride + Ir);
    c[d] = v;
    seen[d] = 1;
  }
  for (int d = 0; d < space->num_dofs(); ++d) {
    if (!seen[d]) {
      const Point p = space->dof_point(d);
      throw std::invalid_argument("missing sample for interpolation node (" + std::to_string(p.x) +
                                  ", " + std::to_string(p.y) + ")");
    }
  }
  return FeFunction(std::move(space), std::move(c));
}

FeFunction nodal_interpolate(const ScalarField& f, FeSpacePtr space) {
  Vector c(space->num_dofs());
  for (int d = 0; d < space->num_dofs(); ++d) c[d] = f(space->dof_point(d));
  return FeFunction(std::move(space), std::move(c));
}

NodeSamples sample_at_nodes(const ScalarField& f, const FeSpace& space) {
  NodeSamples out;
  out.reserve(space.num_dofs());
  for (int d = 0; d < space.num_dofs(); ++d) {
    const Point p = space.dof_point(d);
    out.emplace_back(p, f(p));
  }
  return out;
}

double integrate(const Mesh& mesh, const ElementIntegrand& integrand, int quadrature_degree) {
  const auto& rule = triangle_rule(quadrature_degree);
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double s = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
      const auto& l = rule.points[k];
      s += rule.weights[k] * integrand(t, l, map_to_physical(mesh, t, l));
    }
    total += s * mesh.signed_area(t);
  }
  return total;
}

double l2_norm(const FeFunction& g) {
  return std::sqrt(integrate(g.space().mesh(), [&](int t, const auto& l, const Point&) {
    const double v = g.value(t, l);
    return v * v;
  }));
}

double l2_norm(const ScalarField& g, const Mesh& mesh) {
  return std::sqrt(integrate(mesh, [&](int, const auto&, const Point& x) {
    const double v = g(x);
    return v * v;
  }));
}

double h1_seminorm(const FeFunction& g) {
  return std::sqrt(integrate(g.space().mesh(), [&](int t, const auto& l, const Point&) {
    return g.gradient(t, l).squaredNorm();
  }));
}

double l2_distance(const FeFunction& g1, const FeFunction& g2) {
  const bool same = g1.space().mesh_ptr() == g2.space().mesh_ptr() ||
                    g1.space().mesh().n() == g2.space().mesh().n();
  const FeFunction& fine = g1.space().mesh().n() >= g2.space().mesh().n() ? g1 : g2;
  const FeFunction& other = &fine == &g1 ? g2 : g1;
  return std::sqrt(integrate(fine.space().mesh(), [&](int t, const auto& l, const Point& x) {
    const double a = fine.value(t, l);
    const double b = same ? other.value(t, l) : other.value(x);
    return (a - b) * (a - b);
  }));
}

double l2_distance(const FeFunction& g, const ScalarField& field, const Mesh& mesh) {
  const bool same = g.space().mesh().n() == mesh.n();
  return std::sqrt(integrate(mesh, [&](int t, const auto& l, const Point& x) {
    const double d = (same ? g.value(t, l) : g.value(x)) - field(x);
    return d * d;
  }));
}

SparseMatrix evaluation_matrix(const FeSpace& space, const std::vector<Point>& points) {
  const int nl = space.dofs_per_element();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(points.size() * nl);
  std::array<double, 6> phi;
  for (size_t k = 0; k < points.size(); ++k) {
    const Location loc = locate_element(space.mesh(), points[k]);
    space.shape_values(loc.bary, std::span<double>(phi.data(), nl));
    const auto dofs = space.element_dofs(loc.triangle);
    for (int i = 0; i < nl; ++i) {
      if (phi[i] != 0.0) trips.emplace_back(static_cast<int>(k), dofs[i], phi[i]);
    }
  }
  SparseMatrix E(static_cast<Eigen::Index>(points.size()), space.num_dofs());
  E.setFromTriplets(trips.begin(), trips.end());
  return E;
}

std::vector<Point> dof_points(const FeSpace& space) {
  std::vector<Point> pts(space.num_dofs());
  for (int d = 0; d < space.num_dofs(); ++d) pts[d] = space.dof_point(d);
  return pts;
}

}  // namespace cda
