#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cda/analysis.hpp"
#include "cda/assimilation.hpp"

namespace cda {

enum class Target { Conductivity, Source };
enum class StopReason { JIncrease, MaxIterations, GradientFloor };

std::string to_string(Target t);        // "q" | "f"
std::string to_string(StopReason r);    // "j-increase" | "max-iter" | "gradient-floor"
Target parse_target(const std::string& s);

struct ReconstructionConfig {
  Target target = Target::Conductivity;
  int recon_n = 8;          // h_q = 1/recon_n
  int recon_degree = 1;
  /// Update g_{k+1} = g_k + step·d_k. Unset: default_step_size(mu, recon_n).
  std::optional<double> step_size;
  /// Precondition the gradient by the inverse mass matrix of the recon space
  /// (the L² Riesz representative) before the CG update.
  bool riesz = false;
  int max_iterations = 200;
  int cg_restart = 10;
  double gradient_floor = 1e-14;
  /// Constant initial iterate. Unset: midpoint of the declared bounds.
  std::optional<double> initial_constant;
  /// Clamp every iterate to the declared bounds.
  bool clamp = false;

  void validate() const;
};

/// Step used when none is configured: 100·μ/h², h = 1/recon_n. Proportional
/// to μ; the 1/h² factor compensates the O(h²) size of load-vector entries.
double default_step_size(double mu, int recon_n);

/// g_j = (1/μ) ∫ Φ_j ∇v·∇w_obs, integrated on v's mesh.
Vector grad_q_approx(const FeFunction& v, const FeFunction& w_obs, double mu,
                     const FeSpace& recon);
/// g_j = −(1/μ) ∫ Φ_j w_obs.
Vector grad_f_approx(const FeFunction& w_obs, double mu, const FeSpace& recon);

/// Fletcher–Reeves state. The first call and every `restart`-th call return
/// the steepest-descent direction −g.
struct CgState {
  int restart = 10;
  int calls = 0;
  Vector prev_grad;
  Vector prev_dir;
};
Vector cg_step(CgState& state, const Vector& g);

/// Projects coefficients onto [lo, hi].
void clamp_admissible(Vector& coeffs, const Bounds& bounds);

struct ReconstructionResult {
  FeFunction estimate;
  std::vector<double> J_history;  // J of every accepted iterate, J_history[0] at the initial guess
  int iterations = 0;             // accepted updates
  StopReason stop_reason = StopReason::MaxIterations;
  std::optional<ErrorReport> error;
};

/// Minimizes J over the recon space. `model` supplies the coefficients the
/// CDA solves use (b and c may be perturbed); its target coefficient (q or f)
/// is never read by the iteration and only serves as the truth for the error
/// report. `initial` overrides the constant initial iterate.
ReconstructionResult reconstruct(const ProblemSpec& model, const AssimilationConfig& acfg,
                                 const ReconstructionConfig& rcfg, const Observation& obs,
                                 const std::optional<FeFunction>& initial = std::nullopt);

/// Manifest line "target,mu,h_recon,delta,seed,stop_reason,E".
std::string result_manifest_header();
std::string result_manifest_row(const ReconstructionResult& r, const AssimilationConfig& acfg,
                                 const ReconstructionConfig& rcfg);
/// CSV "iter,J".
void write_history_csv(std::ostream& os, const ReconstructionResult& r);

}  // namespace cda
