#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cda/model.hpp"

namespace cda {

/// ‖g − g_true‖ / ‖g_true‖ in L², by degree-6 quadrature on a uniform mesh
/// `refine` times finer than g's mesh (refine ≥ 4).
double relative_error(const FeFunction& g, const ScalarField& g_true, int refine = 8);

/// Relative error of the degree-1 nodal interpolant of `g_true` on the
/// recon_n mesh; the yardstick a reconstruction is compared against.
double interpolation_reference(const ScalarField& g_true, int recon_n, int degree = 1);

struct ErrorReport {
  double E = 0.0;
  double E_ref = 0.0;
  double ratio() const { return E / E_ref; }
};

ErrorReport error_report(const FeFunction& g, const ScalarField& g_true);
/// "E,E_ref,ratio" header and row.
std::string error_report_header();
std::string error_report_row(const ErrorReport& r);

enum class PositivityCondition { PC1, PC2 };

struct PositivityReport {
  PositivityCondition condition = PositivityCondition::PC1;
  double c = 0.0;
  double beta = 0.0;
  bool holds = false;
  double min_slack = 0.0;   // min over samples of (expression − c·dist^β)
  Point argmin{0.0, 0.0};
  int sample_count = 0;
};

/// PC1:  |∇u|² − ¼Δ(u²) = ½|∇u|² − ½uΔu ≥ c·dist^β
/// PC2:  u ≥ c·dist^β
/// Both are checked at three interior points of every triangle of the
/// uniform grid_n mesh, so the elementwise Hessian of u_h is well defined
/// when grid_n is a multiple of u_h's mesh. The default is twice the
/// observation mesh (coarse_n = 16), the resolution the data supports.
/// holds ⇔ min_slack ≥ −1e−9. PC1 needs degree 2.
inline constexpr int kDefaultPcGrid = 32;
PositivityReport verify_pc1(const FeFunction& u_h, double c, double beta,
                            int grid_n = kDefaultPcGrid);
PositivityReport verify_pc2(const FeFunction& u_h, double c, double beta,
                            int grid_n = kDefaultPcGrid);

std::string positivity_header();
std::string positivity_row(const PositivityReport& r);

/// Constants of the scalar comparison ODE  θ' = M + c2 θ − c1 θ^{1+β}.
struct OdeBoundProblem {
  double c1 = 1.0;
  double c2 = 0.0;
  double M = 0.0;
  double beta = 0.0;
  void validate() const;
};

/// Unique positive root of c1 ξ^{1+β} − c2 ξ − M = 0 (geometric bracket
/// expansion, then bisection to 1e-12 relative).
double xi_star(const OdeBoundProblem& p);

struct OdeSample {
  double z = 0.0;
  double theta = 0.0;
};

/// Implicit Euler steps of size dz from θ(0) = theta0 ≥ 0 up to z_end; each
/// step's nonlinear equation is solved by bisection inside [θ_n, ξ*], so the
/// discrete trajectory is monotone. Throws std::runtime_error if consecutive
/// increments change sign (a step-size instability).
std::vector<OdeSample> simulate_ode_bound(const OdeBoundProblem& p, double theta0,
                                          double z_end, double dz);

}  // namespace cda
