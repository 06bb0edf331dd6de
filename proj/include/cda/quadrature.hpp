#pragma once

#include <array>
#include <vector>

namespace cda {

/// Symmetric rule on a triangle in barycentric form. Weights sum to one, so
/// the integral over a triangle T is |T| * sum_k w_k f(x_k).
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Smallest built-in rule that is exact for polynomials of the requested
/// degree (available: 1, 2, 4, 6). Throws std::invalid_argument above 6.
const QuadratureRule& triangle_rule(int degree);

inline constexpr int kAssemblyQuadratureDegree = 4;
inline constexpr int kNormQuadratureDegree = 6;

}  // namespace cda
