#include "cda/fe_space.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cda {

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles()[t];
  const Point& a = mesh.vertices()[tri[0]];
  const Point& b = mesh.vertices()[tri[1]];
  const Point& c = mesh.vertices()[tri[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  TriangleGeometry g;
  g.area = 0.5 * det;
  g.grad_lambda[1] = Vec2((c.y - a.y) / det, -(c.x - a.x) / det);
  g.grad_lambda[2] = Vec2(-(b.y - a.y) / det, (b.x - a.x) / det);
  g.grad_lambda[0] = -g.grad_lambda[1] - g.grad_lambda[2];
  return g;
}

FeSpace::FeSpace(MeshPtr mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw std::invalid_argument("FeSpace requires a mesh");
  if (degree != 1 && degree != 2) {
    throw std::invalid_argument("Lagrange degree must be 1 or 2, got " + std::to_string(degree));
  }
  const int n = mesh_->n();
  const int ln = lattice_n();
  const int stride = ln + 1;
  auto lattice_of_vertex = [&](int v) {
    return std::array<int, 2>{degree_ * (v % (n + 1)), degree_ * (v / (n + 1))};
  };

  const int nt = mesh_->num_triangles();
  cell_dofs_.resize(static_cast<size_t>(nt) * dofs_per_element());
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh_->triangles()[t];
    std::array<std::array<int, 2>, 3> L;
    for (int k = 0; k < 3; ++k) L[k] = lattice_of_vertex(tri[k]);
    int* out = cell_dofs_.data() + static_cast<size_t>(t) * dofs_per_element();
    for (int k = 0; k < 3; ++k) out[k] = L[k][1] * stride + L[k][0];
    if (degree_ == 2) {
      constexpr int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
      for (int e = 0; e < 3; ++e) {
        const auto& p = L[edges[e][0]];
        const auto& q = L[edges[e][1]];
        out[3 + e] = ((p[1] + q[1]) / 2) * stride + (p[0] + q[0]) / 2;
      }
    }
  }

  boundary_.assign(num_dofs(), 0);
  for (int J = 0; J <= ln; ++J) {
    for (int I = 0; I <= ln; ++I) {
      const int d = J * stride + I;
      if (I == 0 || J == 0 || I == ln || J == ln) {
        boundary_[d] = 1;
        boundary_dofs_.push_back(d);
      } else {
        interior_dofs_.push_back(d);
      }
    }
  }
}

Point FeSpace::dof_point(int dof) const {
  const int stride = lattice_n() + 1;
  const double s = 1.0 / lattice_n();
  return {(dof % stride) * s, (dof / stride) * s};
}

void FeSpace::shape_values(const std::array<double, 3>& l, std::span<double> out) const {
  if (degree_ == 1) {
    out[0] = l[0];
    out[1] = l[1];
    out[2] = l[2];
    return;
  }
  out[0] = l[0] * (2.0 * l[0] - 1.0);
  out[1] = l[1] * (2.0 * l[1] - 1.0);
  out[2] = l[2] * (2.0 * l[2] - 1.0);
  out[3] = 4.0 * l[0] * l[1];
  out[4] = 4.0 * l[1] * l[2];
  out[5] = 4.0 * l[2] * l[0];
}

void FeSpace::shape_gradients(const TriangleGeometry& g, const std::array<double, 3>& l,
                              std::span<Vec2> out) const {
  const auto& G = g.grad_lambda;
  if (degree_ == 1) {
    out[0] = G[0];
    out[1] = G[1];
    out[2] = G[2];
    return;
  }
  for (int k = 0; k < 3; ++k) out[k] = (4.0 * l[k] - 1.0) * G[k];
  out[3] = 4.0 * (l[0] * G[1] + l[1] * G[0]);
  out[4] = 4.0 * (l[1] * G[2] + l[2] * G[1]);
  out[5] = 4.0 * (l[2] * G[0] + l[0] * G[2]);
}

void FeSpace::shape_hessians(const TriangleGeometry& g, std::span<Mat2> out) const {
  const auto& G = g.grad_lambda;
  if (degree_ == 1) {
    for (int k = 0; k < 3; ++k) out[k].setZero();
    return;
  }
  auto sym = [](const Vec2& a, const Vec2& b) -> Mat2 {
    return a * b.transpose() + b * a.transpose();
  };
  for (int k = 0; k < 3; ++k) out[k] = 4.0 * G[k] * G[k].transpose();
  out[3] = 4.0 * sym(G[0], G[1]);
  out[4] = 4.0 * sym(G[1], G[2]);
  out[5] = 4.0 * sym(G[2], G[0]);
}

FeSpacePtr make_space(MeshPtr mesh, int degree) {
  return std::make_shared<const FeSpace>(std::move(mesh), degree);
}

FeSpacePtr make_space(int n, int degree) { return make_space(build_uniform_mesh(n), degree); }

FeFunction::FeFunction(FeSpacePtr space) : space_(std::move(space)) {
  coeffs_ = Vector::Zero(space_->num_dofs());
}

FeFunction::FeFunction(FeSpacePtr space, Vector coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_->num_dofs()) {
    throw std::invalid_argument("coefficient length " + std::to_string(coeffs_.size()) +
                                " does not match dof count " +
                                std::to_string(space_->num_dofs()));
  }
}

double FeFunction::value(int t, const std::array<double, 3>& bary) const {
  std::array<double, 6> phi;
  const int nl = space_->dofs_per_element();
  space_->shape_values(bary, std::span<double>(phi.data(), nl));
  const auto dofs = space_->element_dofs(t);
  double s = 0.0;
  for (int k = 0; k < nl; ++k) s += coeffs_[dofs[k]] * phi[k];
  return s;
}

Vec2 FeFunction::gradient(int t, const std::array<double, 3>& bary) const {
  std::array<Vec2, 6> dphi;
  const int nl = space_->dofs_per_element();
  const auto g = triangle_geometry(space_->mesh(), t);
  space_->shape_gradients(g, bary, std::span<Vec2>(dphi.data(), nl));
  const auto dofs = space_->element_dofs(t);
  Vec2 s = Vec2::Zero();
  for (int k = 0; k < nl; ++k) s += coeffs_[dofs[k]] * dphi[k];
  return s;
}

Mat2 FeFunction::hessian(int t) const {
  std::array<Mat2, 6> hess;
  const int nl = space_->dofs_per_element();
  const auto g = triangle_geometry(space_->mesh(), t);
  space_->shape_hessians(g, std::span<Mat2>(hess.data(), nl));
  const auto dofs = space_->element_dofs(t);
  Mat2 s = Mat2::Zero();
  for (int k = 0; k < nl; ++k) s += coeffs_[dofs[k]] * hess[k];
  return s;
}

double FeFunction::value(Point p) const {
  const auto loc = locate_element(space_->mesh(), p);
  return value(loc.triangle, loc.bary);
}

Vec2 FeFunction::gradient(Point p) const {
  const auto loc = locate_element(space_->mesh(), p);
  return gradient(loc.triangle, loc.bary);
}

void dump_fe_function(std::ostream& os, const FeFunction& f) {
  os.precision(std::numeric_limits<double>::max_digits10);
  os << f.space().degree() << ' ' << f.space().mesh().n() << '\n';
  for (Eigen::Index i = 0; i < f.coefficients().size(); ++i) os << f.coefficients()[i] << '\n';
}

FeFunction load_fe_function(std::istream& is) {
  int degree = 0;
  int n = 0;
  if (!(is >> degree >> n)) throw std::runtime_error("FE dump: missing 'degree n' header");
  auto space = make_space(n, degree);
  Vector c(space->num_dofs());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!(is >> c[i])) {
      throw std::runtime_error("FE dump: expected " + std::to_string(c.size()) +
                               " coefficients, read " + std::to_string(i));
    }
  }
  return FeFunction(space, std::move(c));
}

}  // namespace cda
