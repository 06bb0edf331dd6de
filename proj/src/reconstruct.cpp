#include "cda/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cda/errors.hpp"
#include "cda/linear_solver.hpp"
#include "cda/projection.hpp"
#include "cda/quadrature.hpp"

namespace cda {

std::string to_string(Target t) { return t == Target::Conductivity ? "q" : "f"; }

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::JIncrease: return "j-increase";
    case StopReason::MaxIterations: return "max-iter";
    case StopReason::GradientFloor: return "gradient-floor";
  }
  return "unknown";
}

Target parse_target(const std::string& s) {
  if (s == "q") return Target::Conductivity;
  if (s == "f") return Target::Source;
  throw ConfigError("target", "target: expected 'q' or 'f', got '" + s + "'");
}

void ReconstructionConfig::validate() const {
  auto check = [](bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(field, std::string(field) + ": " + what);
  };
  check(recon_n >= 1, "recon_n", "must be positive");
  check(recon_degree == 1 || recon_degree == 2, "recon_degree", "must be 1 or 2");
  check(!step_size || (std::isfinite(*step_size) && *step_size > 0.0), "step_size",
        "must be positive");
  check(max_iterations >= 0, "max_iterations", "must be non-negative");
  check(cg_restart >= 1, "cg_restart", "must be positive");
  check(gradient_floor >= 0.0, "gradient_floor", "must be non-negative");
  check(!initial_constant || std::isfinite(*initial_constant), "initial_constant",
        "must be finite");
}

double default_step_size(double mu, int recon_n) {
  return 100.0 * mu * static_cast<double>(recon_n) * recon_n;
}

namespace {

// Quadrature on the solver mesh with the recon basis tabulated at every
// point; built once per (solver, recon) pair.
class GradientAssembler {
 public:
  GradientAssembler(const FeSpace& solver, const FeSpace& recon)
      : recon_(recon), rule_(triangle_rule(kAssemblyQuadratureDegree)) {
    const Mesh& mesh = solver.mesh();
    const int nr = recon.dofs_per_element();
    const int nq = rule_.size();
    weights_.resize(static_cast<size_t>(mesh.num_triangles()) * nq);
    recon_tri_.resize(mesh.num_triangles());
    phi_.resize(weights_.size() * nr);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const double area = mesh.signed_area(t);
      const int rt = locate_element(recon.mesh(), map_to_physical(mesh, t, {1. / 3, 1. / 3, 1. / 3}))
                         .triangle;
      recon_tri_[t] = rt;
      for (int k = 0; k < nq; ++k) {
        const size_t idx = static_cast<size_t>(t) * nq + k;
        weights_[idx] = rule_.weights[k] * area;
        const Point x = map_to_physical(mesh, t, rule_.points[k]);
        recon.shape_values(barycentric(recon.mesh(), rt, x),
                           std::span<double>(phi_.data() + idx * nr, nr));
      }
    }
  }

  template <class F>
  Vector assemble(int num_solver_triangles, F&& integrand) const {
    const int nr = recon_.dofs_per_element();
    const int nq = rule_.size();
    Vector g = Vector::Zero(recon_.num_dofs());
    for (int t = 0; t < num_solver_triangles; ++t) {
      const auto dofs = recon_.element_dofs(recon_tri_[t]);
      for (int k = 0; k < nq; ++k) {
        const size_t idx = static_cast<size_t>(t) * nq + k;
        const double w = weights_[idx] * integrand(t, rule_.points[k]);
        for (int i = 0; i < nr; ++i) g[dofs[i]] += w * phi_[idx * nr + i];
      }
    }
    return g;
  }

  Vector grad_q(const FeFunction& v, const FeFunction& w, double mu) const {
    return assemble(v.space().mesh().num_triangles(),
                    [&](int t, const std::array<double, 3>& l) {
                      return v.gradient(t, l).dot(w.gradient(t, l));
                    }) / mu;
  }

  Vector grad_f(const FeFunction& w, double mu) const {
    return assemble(w.space().mesh().num_triangles(),
                    [&](int t, const std::array<double, 3>& l) { return w.value(t, l); }) / -mu;
  }

 private:
  const FeSpace& recon_;
  const QuadratureRule& rule_;
  std::vector<double> weights_;
  std::vector<int> recon_tri_;
  std::vector<double> phi_;
};

void check_same_space(const FeFunction& a, const FeFunction& b) {
  if (a.space().mesh().n() != b.space().mesh().n() || a.space().degree() != b.space().degree()) {
    throw std::invalid_argument("v and w_obs must live on the same solver space");
  }
}

}  // namespace

Vector grad_q_approx(const FeFunction& v, const FeFunction& w_obs, double mu,
                     const FeSpace& recon) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  check_same_space(v, w_obs);
  return GradientAssembler(v.space(), recon).grad_q(v, w_obs, mu);
}

Vector grad_f_approx(const FeFunction& w_obs, double mu, const FeSpace& recon) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return GradientAssembler(w_obs.space(), recon).grad_f(w_obs, mu);
}

Vector cg_step(CgState& s, const Vector& g) {
  Vector d;
  const bool restart = s.calls % s.restart == 0 || s.prev_grad.size() != g.size();
  const double prev = restart ? 0.0 : s.prev_grad.squaredNorm();
  if (restart || prev == 0.0) {
    d = -g;
  } else {
    d = -g + (g.squaredNorm() / prev) * s.prev_dir;
  }
  s.prev_grad = g;
  s.prev_dir = d;
  ++s.calls;
  return d;
}

void clamp_admissible(Vector& coeffs, const Bounds& b) {
  coeffs = coeffs.cwiseMax(b.lo).cwiseMin(b.hi);
}

ReconstructionResult reconstruct(const ProblemSpec& model, const AssimilationConfig& acfg,
                                 const ReconstructionConfig& rcfg, const Observation& obs,
                                 const std::optional<FeFunction>& initial) {
  rcfg.validate();
  if (!(acfg.mu > 0.0)) throw ConfigError("mu", "mu: reconstruction needs mu > 0");
  const bool target_q = rcfg.target == Target::Conductivity;
  const Bounds bounds = target_q ? model.q_bounds : model.f_bounds;
  const FeSpacePtr recon = make_space(rcfg.recon_n, rcfg.recon_degree);
  const double step = rcfg.step_size.value_or(default_step_size(acfg.mu, rcfg.recon_n));

  Vector x;
  if (initial) {
    x = nodal_interpolate([&](const Point& p) { return initial->value(p); }, recon).coefficients();
  } else {
    x = Vector::Constant(recon->num_dofs(), rcfg.initial_constant.value_or(bounds.midpoint()));
  }
  if (rcfg.clamp) clamp_admissible(x, bounds);

  CdaSolver solver(acfg, obs);
  const VectorField b = model.b();
  if (!target_q) solver.set_operator(model.q.field(), b, model.c.field());
  const GradientAssembler grad(*solver.space(), *recon);
  std::optional<LinearSolver> riesz;
  if (rcfg.riesz) riesz.emplace(assemble_mass(*recon), 1e-12);

  auto evaluate = [&](const Vector& coeffs, FeFunction& v) {
    const FeFunction g(recon, coeffs);
    const ScalarField field = [g](const Point& p) { return g.value(p); };
    if (target_q) {
      solver.set_operator(field, b, model.c.field());
      v = solver.solve(model.f.field());
    } else {
      v = solver.solve(field);
    }
    return error_functional(obs, v, acfg.misfit_mode);
  };

  ReconstructionResult res{FeFunction(recon, x), {}, 0, StopReason::MaxIterations, std::nullopt};
  FeFunction v(solver.space());
  double J = evaluate(x, v);
  res.J_history.push_back(J);
  CgState cg;
  cg.restart = rcfg.cg_restart;
  for (int k = 0; k < rcfg.max_iterations; ++k) {
    const FeFunction w = solver.feedback_residual(v);
    Vector g = target_q ? grad.grad_q(v, w, acfg.mu) : grad.grad_f(w, acfg.mu);
    if (g.norm() <= rcfg.gradient_floor) {
      res.stop_reason = StopReason::GradientFloor;
      break;
    }
    if (riesz) g = riesz->solve(g);
    Vector trial = x + step * cg_step(cg, g);
    if (rcfg.clamp) clamp_admissible(trial, bounds);
    FeFunction v_trial(solver.space());
    const double J_trial = evaluate(trial, v_trial);
    if (!(J_trial <= J)) {
      res.stop_reason = StopReason::JIncrease;
      break;
    }
    x = std::move(trial);
    v = std::move(v_trial);
    J = J_trial;
    res.J_history.push_back(J);
    ++res.iterations;
  }
  res.estimate = FeFunction(recon, x);
  res.error = error_report(res.estimate, target_q ? model.q.field() : model.f.field());
  return res;
}

std::string result_manifest_header() { return "target,mu,h_recon,delta,seed,stop_reason,E"; }

std::string result_manifest_row(const ReconstructionResult& r, const AssimilationConfig& acfg,
                                const ReconstructionConfig& rcfg) {
  std::ostringstream os;
  os.precision(10);
  os << to_string(rcfg.target) << ',' << acfg.mu << ',' << 1.0 / rcfg.recon_n << ','
     << acfg.obs.delta << ',' << acfg.obs.seed << ',' << to_string(r.stop_reason) << ','
     << (r.error ? r.error->E : std::nan(""));
  return os.str();
}

void write_history_csv(std::ostream& os, const ReconstructionResult& r) {
  const auto old = os.precision(17);
  os << "iter,J\n";
  for (size_t k = 0; k < r.J_history.size(); ++k) os << k << ',' << r.J_history[k] << '\n';
  os.precision(old);
}

}  // namespace cda
