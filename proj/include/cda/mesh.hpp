#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

namespace cda {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform triangulation of the unit square (0,1)^2.
///
/// Vertices are numbered row by row, v = j*(n+1) + i for the vertex at
/// (i/n, j/n). Cell (i, j) is split along its lower-left to upper-right
/// diagonal into triangles 2*(j*n+i) (below the diagonal) and 2*(j*n+i)+1
/// (above it); both are counter-clockwise.
class Mesh {
 public:
  explicit Mesh(int n);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  bool is_boundary_vertex(int v) const { return boundary_[v] != 0; }
  const std::vector<char>& boundary_vertex_flags() const { return boundary_; }

  /// Signed area; positive for every triangle of this mesh.
  double signed_area(int t) const;

 private:
  int n_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<char> boundary_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Throws std::invalid_argument for n < 1.
MeshPtr build_uniform_mesh(int n);

/// min(x, 1-x, y, 1-y); throws std::invalid_argument outside [0,1]^2.
double boundary_distance(Point p);

struct Location {
  int triangle = -1;
  std::array<double, 3> bary{};
};

/// Finds the triangle containing p. Points on shared edges or vertices go to
/// the lowest-index triangle that contains them (tolerance 1e-12 on the
/// barycentric coordinates). Points marginally outside the square are
/// clamped onto it.
Location locate_element(const Mesh& mesh, Point p);

/// Barycentric coordinates of p with respect to triangle t (no containment check).
std::array<double, 3> barycentric(const Mesh& mesh, int t, Point p);

/// Plain-text dump: one "x y" line per vertex, then one "i j k" line per triangle.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace cda
