#include "cda/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace cda {
namespace {

void add_orbit3(QuadratureRule& r, double a, double w) {
  const double b = 0.5 * (1.0 - a);
  r.points.push_back({a, b, b});
  r.points.push_back({b, a, b});
  r.points.push_back({b, b, a});
  for (int k = 0; k < 3; ++k) r.weights.push_back(w);
}

void add_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double p[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
  for (const auto& q : p) {
    r.points.push_back({q[0], q[1], q[2]});
    r.weights.push_back(w);
  }
}

QuadratureRule make_rule(int degree) {
  QuadratureRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
      r.weights.push_back(1.0);
      break;
    case 2:
      add_orbit3(r, 2.0 / 3, 1.0 / 3);
      break;
    case 4:
      // Dunavant, 6 points.
      add_orbit3(r, 0.108103018168070, 0.223381589678011);
      add_orbit3(r, 0.816847572980459, 0.109951743655322);
      break;
    case 6:
      // Dunavant, 12 points.
      add_orbit3(r, 0.501426509658179, 0.116786275726379);
      add_orbit3(r, 0.873821971016996, 0.050844906370207);
      add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    default:
      throw std::logic_error("no rule of degree " + std::to_string(degree));
  }
  return r;
}

}  // namespace

const QuadratureRule& triangle_rule(int degree) {
  static const QuadratureRule r1 = make_rule(1);
  static const QuadratureRule r2 = make_rule(2);
  static const QuadratureRule r4 = make_rule(4);
  static const QuadratureRule r6 = make_rule(6);
  if (degree <= 1) return r1;
  if (degree == 2) return r2;
  if (degree <= 4) return r4;
  if (degree <= 6) return r6;
  throw std::invalid_argument("no triangle rule exact to degree " + std::to_string(degree));
}

}  // namespace cda
