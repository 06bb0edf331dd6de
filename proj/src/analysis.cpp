#include "cda/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cda/errors.hpp"
#include "cda/projection.hpp"

namespace cda {

double relative_error(const FeFunction& g, const ScalarField& g_true, int refine) {
  if (refine < 4) throw std::invalid_argument("evaluation mesh must be at least 4x finer");
  const MeshPtr eval = build_uniform_mesh(refine * g.space().mesh().n());
  const double denom = l2_norm(g_true, *eval);
  if (!(denom > 0.0)) throw std::invalid_argument("reference field has zero L2 norm");
  return l2_distance(g, g_true, *eval) / denom;
}

double interpolation_reference(const ScalarField& g_true, int recon_n, int degree) {
  return relative_error(nodal_interpolate(g_true, make_space(recon_n, degree)), g_true);
}

ErrorReport error_report(const FeFunction& g, const ScalarField& g_true) {
  const FeSpace& s = g.space();
  return {relative_error(g, g_true), interpolation_reference(g_true, s.mesh().n(), s.degree())};
}

std::string error_report_header() { return "E,E_ref,ratio"; }

std::string error_report_row(const ErrorReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.E << ',' << r.E_ref << ',' << r.ratio();
  return os.str();
}

namespace {

// Interior sample points: three per triangle of the uniform grid_n mesh.
template <class F>
PositivityReport scan(PositivityCondition cond, double c, double beta,
                      int grid_n, F&& expression) {
  if (!(c >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("c and beta must be >= 0");
  if (grid_n < 1) throw std::invalid_argument("grid_n must be positive");
  const MeshPtr grid = build_uniform_mesh(grid_n);
  static constexpr double a = 2.0 / 3.0, b = 1.0 / 6.0;
  static constexpr std::array<std::array<double, 3>, 3> pts{{{a, b, b}, {b, a, b}, {b, b, a}}};
  PositivityReport r;
  r.condition = cond;
  r.c = c;
  r.beta = beta;
  r.min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < grid->num_triangles(); ++t) {
    for (const auto& l : pts) {
      const Point x = map_to_physical(*grid, t, l);
      const double slack = expression(x) - c * std::pow(boundary_distance(x), beta);
      if (slack < r.min_slack) {
        r.min_slack = slack;
        r.argmin = x;
      }
      ++r.sample_count;
    }
  }
  r.holds = r.min_slack >= -1e-9;
  return r;
}

}  // namespace

PositivityReport verify_pc1(const FeFunction& u_h, double c, double beta, int grid_n) {
  if (u_h.space().degree() < 2) {
    throw std::invalid_argument("PC1 needs second derivatives: use a degree-2 solution");
  }
  return scan(PositivityCondition::PC1, c, beta, grid_n, [&](const Point& x) {
    const Location loc = locate_element(u_h.space().mesh(), x);
    const double u = u_h.value(loc.triangle, loc.bary);
    const Vec2 g = u_h.gradient(loc.triangle, loc.bary);
    const double lap = u_h.hessian(loc.triangle).trace();
    return 0.5 * g.squaredNorm() - 0.5 * u * lap;
  });
}

PositivityReport verify_pc2(const FeFunction& u_h, double c, double beta, int grid_n) {
  return scan(PositivityCondition::PC2, c, beta, grid_n,
              [&](const Point& x) { return u_h.value(x); });
}

std::string positivity_header() { return "condition,c,beta,holds,min_slack,argmin_x,argmin_y,samples"; }

std::string positivity_row(const PositivityReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << (r.condition == PositivityCondition::PC1 ? "PC1" : "PC2") << ',' << r.c << ',' << r.beta
     << ',' << (r.holds ? "true" : "false") << ',' << r.min_slack << ',' << r.argmin.x << ','
     << r.argmin.y << ',' << r.sample_count;
  return os.str();
}

void OdeBoundProblem::validate() const {
  auto check = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, std::string(field) + ": " + what);
  };
  check(std::isfinite(c1) && c1 > 0.0, "c1", "must be positive");
  check(std::isfinite(c2) && c2 >= 0.0, "c2", "must be non-negative");
  check(std::isfinite(M) && M >= 0.0, "M", "must be non-negative");
  check(std::isfinite(beta) && beta >= 0.0, "beta", "must be non-negative");
  check(beta > 0.0 || c1 > c2, "c1", "must exceed c2 when beta = 0");
}

namespace {

double rhs(const OdeBoundProblem& p, double th) {
  return p.M + p.c2 * th - p.c1 * std::pow(th, 1.0 + p.beta);
}

}  // namespace

double xi_star(const OdeBoundProblem& p) {
  p.validate();
  if (p.M == 0.0) {
    // ξ = 0 is a root; the positive one exists iff c2 > 0.
    return p.beta > 0.0 && p.c2 > 0.0 ? std::pow(p.c2 / p.c1, 1.0 / p.beta) : 0.0;
  }
  double lo = 0.0, hi = 1.0;
  while (rhs(p, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("xi_star: bracket expansion overflowed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rhs(p, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<OdeSample> simulate_ode_bound(const OdeBoundProblem& p, double theta0,
                                          double z_end, double dz) {
  if (!(theta0 >= 0.0)) throw std::invalid_argument("theta0 must be non-negative");
  if (!(dz > 0.0) || !(z_end > 0.0)) throw std::invalid_argument("dz and z_end must be positive");
  const double xi = xi_star(p);
  const int steps = static_cast<int>(std::ceil(z_end / dz - 1e-9));
  std::vector<OdeSample> out;
  out.reserve(steps + 1);
  out.push_back({0.0, theta0});
  double th = theta0;
  double prev_inc = 0.0;
  for (int s = 1; s <= steps; ++s) {
    // Root of x − dz·rhs(x) − θ_n on [min(θ_n, ξ*), max(θ_n, ξ*)].
    double lo = std::min(th, xi), hi = std::max(th, xi);
    auto h = [&](double x) { return x - dz * rhs(p, x) - th; };
    const double hlo = h(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      ((h(mid) > 0.0) == (hlo > 0.0) ? lo : hi) = mid;
    }
    const double next = 0.5 * (lo + hi);
    const double inc = next - th;
    if (prev_inc * inc < 0.0 && std::abs(inc) > 1e-12 * std::max(1.0, xi)) {
      throw std::runtime_error("simulate_ode_bound: oscillating increments, refine dz");
    }
    if (inc != 0.0) prev_inc = inc;
    th = next;
    out.push_back({s * dz, th});
  }
  return out;
}

}  // namespace cda
