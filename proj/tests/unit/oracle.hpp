#pragma once

// Independent reference quadrature for tests: tensor Gauss-Legendre on the
// square mapped onto a triangle by the Duffy collapse. Shares no code with the
// library's triangle rules.

#include <cmath>
#include <functional>
#include <vector>

#include "cda/mesh.hpp"

namespace oracle {

struct Gauss {
  std::vector<double> x, w;  // on [0, 1]
};

inline Gauss gauss_legendre(int m) {
  Gauss g;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(M_PI * (i - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x.push_back(0.5 * (1.0 - z));
    g.w.push_back(1.0 / ((1.0 - z * z) * dp * dp));
  }
  return g;
}

/// ∫_T f over the triangle (a, b, c).
inline double integrate_triangle(const cda::Point& a, const cda::Point& b, const cda::Point& c,
                                 const std::function<double(double, double)>& f, int m = 10) {
  static thread_local Gauss g;
  if (static_cast<int>(g.x.size()) != m) g = gauss_legendre(m);
  const double det = std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double s = g.x[i];
      const double t = g.x[j] * (1.0 - s);
      const double x = a.x + s * (b.x - a.x) + t * (c.x - a.x);
      const double y = a.y + s * (b.y - a.y) + t * (c.y - a.y);
      sum += g.w[i] * g.w[j] * (1.0 - s) * f(x, y);
    }
  }
  return sum * det;
}

/// ∫_(0,1)² f, split along the uniform mesh of size n.
inline double integrate_square(const std::function<double(double, double)>& f, int n = 16,
                               int m = 10) {
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const cda::Point a{double(i) / n, double(j) / n}, b{double(i + 1) / n, double(j) / n},
          c{double(i + 1) / n, double(j + 1) / n}, d{double(i) / n, double(j + 1) / n};
      sum += integrate_triangle(a, b, c, f, m) + integrate_triangle(a, c, d, f, m);
    }
  }
  return sum;
}

}  // namespace oracle
