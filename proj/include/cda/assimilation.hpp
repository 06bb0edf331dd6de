#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "cda/linear_solver.hpp"
#include "cda/model.hpp"

namespace cda {

/// How the feedback μ·(data − v) enters the assimilation equation.
///  - Interpolation: μ(𝓘_h u^δ − v), the coarse interpolant against the fine state.
///  - Projection:    μ Π_h(𝓘_h u^δ − v), Π_h the L² projection onto the coarse
///                   degree-2 space, coupled through an auxiliary coarse unknown.
enum class FeedbackMode { Interpolation, Projection };

/// Which state the misfit J compares with the data.
///  - Interpolated: ½‖𝓘_h u^δ − 𝓘_h v‖², v re-sampled at the coarse nodes.
///  - Raw:          ½‖𝓘_h u^δ − v‖² on the solver mesh.
enum class MisfitMode { Interpolated, Raw };

struct AssimilationConfig {
  double mu = 1000.0;
  FeedbackMode feedback_mode = FeedbackMode::Interpolation;
  MisfitMode misfit_mode = MisfitMode::Interpolated;
  int solver_n = 64;
  int solver_degree = 2;
  ObservationSpec obs;
  double solve_tolerance = kDefaultSolveTolerance;

  /// mu ≥ 0, degree ∈ {1,2}, solver_n a positive multiple of obs.coarse_n,
  /// delta ∈ [0,1). Throws ConfigError naming the field.
  void validate() const;
};

/// Noisy pointwise data and its degree-2 interpolant on the coarse mesh.
struct Observation {
  FeFunction interpolant;
  Vector samples;  // noisy values at the coarse degree-2 nodes, in dof order
  double delta = 0.0;
  std::uint64_t seed = 0;

  int coarse_n() const { return interpolant.space().mesh().n(); }
};

/// Coefficients entering a CDA solve (possibly perturbed).
struct CdaCoefficients {
  ScalarField q;
  VectorField b;
  ScalarField c;
  ScalarField f;
};

CdaCoefficients coefficients_of(const ProblemSpec& spec);

/// Discrete solution of the forward problem with homogeneous Dirichlet data.
FeFunction solve_forward(const ProblemSpec& spec, int n, int degree,
                         double tolerance = kDefaultSolveTolerance);
FeFunction solve_forward(const CdaCoefficients& coeffs, const FeSpacePtr& space,
                         double tolerance = kDefaultSolveTolerance);

/// Samples u_h at the (2·coarse_n+1)² coarse degree-2 nodes, applies the
/// multiplicative noise, and builds the interpolant.
Observation build_observation(const FeFunction& u_h, const ObservationSpec& obs);

/// Solver for the stationary assimilation equation on a fixed mesh, data and
/// feedback mode. The operator (q, b, c and μ) is factorized once by
/// set_operator and reused for every right-hand side f.
class CdaSolver {
 public:
  CdaSolver(const AssimilationConfig& cfg, const Observation& obs);

  const FeSpacePtr& space() const { return space_; }
  const AssimilationConfig& config() const { return cfg_; }
  const Observation& observation() const { return obs_; }

  void set_operator(const ScalarField& q, const VectorField& b, const ScalarField& c);
  FeFunction solve(const ScalarField& f) const;
  /// Convenience: set_operator + solve.
  FeFunction solve(const CdaCoefficients& coeffs);

  /// 𝓘_h u^δ represented on the solver space (exact for nested degree-2 spaces).
  const FeFunction& data_on_solver_space() const { return data_fine_; }

  /// Coarse feedback target of v: 𝓘_h u^δ − v (interpolation mode) or
  /// 𝓘_h u^δ − Π_h v (projection mode), as a function on the solver space.
  FeFunction feedback_residual(const FeFunction& v) const;

  /// The assembled interpolation-mode system without boundary treatment is
  /// A_forward + μ M; exposed for verification.
  const SparseMatrix& system_matrix() const { return system_; }

 private:
  AssimilationConfig cfg_;
  Observation obs_;
  FeSpacePtr space_;
  FeSpacePtr coarse_space_;
  SparseMatrix mixed_mass_;   // fine × coarse
  SparseMatrix coarse_mass_;  // coarse × coarse
  SparseMatrix prolong_;      // coarse coefficients → solver-space nodal values
  FeFunction data_fine_;
  Vector feedback_load_;      // μ ∫ 𝓘_h u^δ φi
  SparseMatrix system_;
  std::unique_ptr<LinearSolver> solver_;
  std::unique_ptr<LinearSolver> coarse_mass_solver_;
};

FeFunction solve_cda(const CdaCoefficients& coeffs, const AssimilationConfig& cfg,
                     const Observation& obs);

/// Misfit J for the state v (see MisfitMode).
double error_functional(const Observation& obs, const FeFunction& v,
                        MisfitMode mode = MisfitMode::Interpolated);

/// Degree-2 interpolant of v on the observation's coarse mesh.
FeFunction coarse_interpolant(const Observation& obs, const FeFunction& v);

struct ParabolicConfig {
  double dt = 1e-3;
  double T = 0.2;
  double theta = 1.0;                // 1 = implicit Euler
  bool u0_steady_state = true;       // else u(0) = 0
  void validate() const;
};

struct DecaySample {
  double t = 0.0;
  double l2_err = 0.0;
  double h1_semi_err = 0.0;
};

/// θ-scheme for the parabolic truth u and its assimilated companion v
/// (v(0) = 0), feedback built from u(t) at the coarse nodes without noise.
/// Returns ‖w(t)‖ and |w(t)|₁ for w = u − v at every step, t = 0 first.
std::vector<DecaySample> solve_parabolic_cda(const ProblemSpec& truth,
                                             const CdaCoefficients& perturbed,
                                             const AssimilationConfig& cfg,
                                             const ParabolicConfig& pcfg);

/// CSV with header "t,l2_err,h1_semi_err".
void write_decay_csv(std::ostream& os, const std::vector<DecaySample>& series);

/// Rate λ of a least-squares fit ‖w(t)‖ ≈ A e^{−λt} over the samples above
/// `floor_factor` × the final value (the solver/feedback floor).
double fit_decay_rate(const std::vector<DecaySample>& series, double floor_factor = 10.0);

}  // namespace cda
