#include "cda/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cda {

Mesh::Mesh(int n) : n_(n) {
  if (n < 1) {
    throw std::invalid_argument("mesh subdivisions must be >= 1, got " + std::to_string(n));
  }
  const int np = n + 1;
  vertices_.reserve(static_cast<size_t>(np) * np);
  boundary_.reserve(static_cast<size_t>(np) * np);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      boundary_.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  triangles_.reserve(2 * static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * np + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + np;
      const int v11 = v01 + 1;
      triangles_.push_back({v00, v10, v11});
      triangles_.push_back({v00, v11, v01});
    }
  }
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

MeshPtr build_uniform_mesh(int n) { return std::make_shared<const Mesh>(n); }

double boundary_distance(Point p) {
  if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
    throw std::invalid_argument("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                ") lies outside the unit square");
  }
  return std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
}

std::array<double, 3> barycentric(const Mesh& mesh, int t, Point p) {
  const auto& tri = mesh.triangles()[t];
  const Point& a = mesh.vertices()[tri[0]];
  const Point& b = mesh.vertices()[tri[1]];
  const Point& c = mesh.vertices()[tri[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

Location locate_element(const Mesh& mesh, Point p) {
  constexpr double eps = 1e-12;
  const int n = mesh.n();
  p.x = std::clamp(p.x, 0.0, 1.0);
  p.y = std::clamp(p.y, 0.0, 1.0);

  // A point can only lie in cells whose index range covers it; on grid lines
  // the neighbouring cell is a candidate as well.
  const double sx = p.x * n;
  const double sy = p.y * n;
  const int ix = std::min(static_cast<int>(std::floor(sx)), n - 1);
  const int iy = std::min(static_cast<int>(std::floor(sy)), n - 1);

  Location best;
  for (int cj = std::max(iy - 1, 0); cj <= std::min(iy + 1, n - 1); ++cj) {
    for (int ci = std::max(ix - 1, 0); ci <= std::min(ix + 1, n - 1); ++ci) {
      for (int k = 0; k < 2; ++k) {
        const int t = 2 * (cj * n + ci) + k;
        if (best.triangle >= 0 && t >= best.triangle) continue;
        const auto lam = barycentric(mesh, t, p);
        if (lam[0] >= -eps && lam[1] >= -eps && lam[2] >= -eps) {
          best.triangle = t;
          best.bary = lam;
        }
      }
    }
  }
  if (best.triangle < 0) {
    // Unreachable for points inside the square; keep the nearest candidate.
    best.triangle = 2 * (iy * n + ix);
    best.bary = barycentric(mesh, best.triangle, p);
  }
  return best;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& v : mesh.vertices()) os << v.x << ' ' << v.y << '\n';
  for (const auto& t : mesh.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace cda
