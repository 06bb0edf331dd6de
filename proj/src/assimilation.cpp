#include "cda/assimilation.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cda/errors.hpp"
#include "cda/projection.hpp"

namespace cda {

namespace {

using Triplet = Eigen::Triplet<double>;

void zero_boundary(Vector& v, const FeSpace& space) {
  for (int d : space.boundary_dofs()) v[d] = 0.0;
}

// [A  s·B ; Bᵀ  −Mc] with the Dirichlet treatment already in A; rows of s·B
// and columns of Bᵀ belonging to boundary dofs are dropped.
SparseMatrix projection_block(const SparseMatrix& A, const SparseMatrix& B, const SparseMatrix& Mc,
                              double s, const FeSpace& space) {
  const Eigen::Index nf = A.rows();
  const Eigen::Index nc = Mc.rows();
  std::vector<Triplet> trips;
  trips.reserve(A.nonZeros() + 2 * B.nonZeros() + Mc.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
      if (space.is_boundary_dof(static_cast<int>(it.row()))) continue;
      trips.emplace_back(it.row(), nf + it.col(), s * it.value());
      trips.emplace_back(nf + it.col(), it.row(), it.value());
    }
  }
  for (int k = 0; k < Mc.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(Mc, k); it; ++it)
      trips.emplace_back(nf + it.row(), nf + it.col(), -it.value());
  SparseMatrix K(nf + nc, nf + nc);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  return K;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, field + ": " + what);
}

}  // namespace

void AssimilationConfig::validate() const {
  require(std::isfinite(mu) && mu >= 0.0, "mu", "must be finite and non-negative");
  require(solver_degree == 1 || solver_degree == 2, "solver_degree", "must be 1 or 2");
  require(obs.coarse_n >= 1, "coarse_n", "must be positive");
  require(solver_n >= 1 && solver_n % obs.coarse_n == 0, "solver_n",
          "must be a positive multiple of coarse_n (nested sampling)");
  require(obs.delta >= 0.0 && obs.delta < 1.0, "delta", "must lie in [0, 1)");
  require(solve_tolerance > 0.0, "solve_tolerance", "must be positive");
}

CdaCoefficients coefficients_of(const ProblemSpec& spec) {
  return {spec.q.field(), spec.b(), spec.c.field(), spec.f.field()};
}

FeFunction solve_forward(const CdaCoefficients& coeffs, const FeSpacePtr& space,
                         double tolerance) {
  const SparseMatrix A = assemble_operator(*space, coeffs.q, coeffs.b, coeffs.c, 0.0);
  const Vector L = assemble_load(*space, coeffs.f);
  return FeFunction(space, solve_linear(A, L, tolerance));
}

FeFunction solve_forward(const ProblemSpec& spec, int n, int degree, double tolerance) {
  return solve_forward(coefficients_of(spec), make_space(n, degree), tolerance);
}

Observation build_observation(const FeFunction& u_h, const ObservationSpec& obs) {
  if (obs.coarse_n < 1) throw std::invalid_argument("coarse_n must be positive");
  auto coarse = make_space(obs.coarse_n, 2);
  Vector samples(coarse->num_dofs());
  for (int d = 0; d < coarse->num_dofs(); ++d) samples[d] = u_h.value(coarse->dof_point(d));
  samples = apply_noise(samples, obs.delta, obs.seed);
  return Observation{FeFunction(coarse, samples), samples, obs.delta, obs.seed};
}

CdaSolver::CdaSolver(const AssimilationConfig& cfg, const Observation& obs)
    : cfg_(cfg),
      obs_(obs),
      space_(make_space(cfg.solver_n, cfg.solver_degree)),
      coarse_space_(obs.interpolant.space_ptr()),
      data_fine_(space_) {
  cfg_.obs.coarse_n = obs.coarse_n();
  cfg_.validate();
  mixed_mass_ = assemble_mixed_mass(*space_, *coarse_space_);
  coarse_mass_ = assemble_mass(*coarse_space_);
  prolong_ = evaluation_matrix(*coarse_space_, dof_points(*space_));
  data_fine_.coefficients() = prolong_ * obs_.interpolant.coefficients();
  feedback_load_ = cfg_.mu * (mixed_mass_ * obs_.interpolant.coefficients());
  zero_boundary(feedback_load_, *space_);
  if (cfg_.feedback_mode == FeedbackMode::Projection) {
    coarse_mass_solver_ = std::make_unique<LinearSolver>(coarse_mass_, 1e-12);
  }
}

void CdaSolver::set_operator(const ScalarField& q, const VectorField& b, const ScalarField& c) {
  if (cfg_.feedback_mode == FeedbackMode::Interpolation) {
    system_ = assemble_operator_raw(*space_, q, b, c, cfg_.mu);
    SparseMatrix A = system_;
    apply_dirichlet(A, *space_);
    solver_ = std::make_unique<LinearSolver>(A, cfg_.solve_tolerance);
  } else {
    system_ = assemble_operator_raw(*space_, q, b, c, 0.0);
    SparseMatrix A = system_;
    apply_dirichlet(A, *space_);
    const SparseMatrix K = projection_block(A, mixed_mass_, coarse_mass_, cfg_.mu, *space_);
    solver_ = std::make_unique<LinearSolver>(K, cfg_.solve_tolerance);
  }
}

FeFunction CdaSolver::solve(const ScalarField& f) const {
  if (!solver_) throw std::logic_error("CdaSolver::solve called before set_operator");
  const Vector rhs = assemble_load(*space_, f) + feedback_load_;
  const int nf = space_->num_dofs();
  if (cfg_.feedback_mode == FeedbackMode::Interpolation) {
    return FeFunction(space_, solver_->solve(rhs));
  }
  Vector full = Vector::Zero(nf + coarse_space_->num_dofs());
  full.head(nf) = rhs;
  const Vector x = solver_->solve(full);
  return FeFunction(space_, x.head(nf));
}

FeFunction CdaSolver::solve(const CdaCoefficients& coeffs) {
  set_operator(coeffs.q, coeffs.b, coeffs.c);
  return solve(coeffs.f);
}

FeFunction CdaSolver::feedback_residual(const FeFunction& v) const {
  if (cfg_.feedback_mode == FeedbackMode::Interpolation) {
    return FeFunction(space_, data_fine_.coefficients() - v.coefficients());
  }
  // 𝓘_h u^δ − Π_h v, with Π_h v = Mc⁻¹ Bᵀ v lifted back to the solver space.
  const Vector pv = coarse_mass_solver_->solve(mixed_mass_.transpose() * v.coefficients());
  return FeFunction(space_, data_fine_.coefficients() - prolong_ * pv);
}

FeFunction solve_cda(const CdaCoefficients& coeffs, const AssimilationConfig& cfg,
                     const Observation& obs) {
  CdaSolver solver(cfg, obs);
  return solver.solve(coeffs);
}

FeFunction coarse_interpolant(const Observation& obs, const FeFunction& v) {
  const FeSpacePtr& coarse = obs.interpolant.space_ptr();
  Vector c(coarse->num_dofs());
  for (int d = 0; d < coarse->num_dofs(); ++d) c[d] = v.value(coarse->dof_point(d));
  return FeFunction(coarse, std::move(c));
}

double error_functional(const Observation& obs, const FeFunction& v, MisfitMode mode) {
  if (mode == MisfitMode::Interpolated) {
    const Vector d = obs.interpolant.coefficients() - coarse_interpolant(obs, v).coefficients();
    const SparseMatrix Mc = assemble_mass(obs.interpolant.space());
    return 0.5 * d.dot(Mc * d);
  }
  const FeFunction& data = obs.interpolant;
  const double sq = integrate(v.space().mesh(), [&](int t, const std::array<double, 3>& l,
                                                    const Point& x) {
    const double d = data.value(x) - v.value(t, l);
    return d * d;
  });
  return 0.5 * sq;
}

void ParabolicConfig::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
  require(std::isfinite(T) && T >= dt, "T", "must be at least one step");
  require(theta >= 0.5 && theta <= 1.0, "theta", "must lie in [0.5, 1]");
}

std::vector<DecaySample> solve_parabolic_cda(const ProblemSpec& truth,
                                             const CdaCoefficients& perturbed,
                                             const AssimilationConfig& cfg,
                                             const ParabolicConfig& pcfg) {
  cfg.validate();
  pcfg.validate();
  const FeSpacePtr space = make_space(cfg.solver_n, cfg.solver_degree);
  const FeSpacePtr coarse = make_space(cfg.obs.coarse_n, 2);
  const CdaCoefficients exact = coefficients_of(truth);
  const double dt = pcfg.dt;
  const double th = pcfg.theta;
  const double mu = cfg.mu;
  const int nf = space->num_dofs();
  const bool projection = cfg.feedback_mode == FeedbackMode::Projection;

  const SparseMatrix M = assemble_mass(*space);
  const SparseMatrix K = assemble_operator_raw(*space, constant_field(1.0),
                                               constant_vector_field(0, 0), constant_field(0), 0);
  const SparseMatrix Au = assemble_operator_raw(*space, exact.q, exact.b, exact.c, 0.0);
  const SparseMatrix Av0 = assemble_operator_raw(*space, perturbed.q, perturbed.b, perturbed.c, 0.0);
  const Vector Fu = assemble_load(*space, exact.f);
  const Vector Fv = assemble_load(*space, perturbed.f);
  const SparseMatrix B = assemble_mixed_mass(*space, *coarse);
  const SparseMatrix Mc = assemble_mass(*coarse);
  const SparseMatrix R = evaluation_matrix(*space, dof_points(*coarse));

  SparseMatrix Su = M / dt + th * Au;
  apply_dirichlet(Su, *space);
  const LinearSolver solve_u(Su, cfg.solve_tolerance);

  const SparseMatrix Av = projection ? Av0 : SparseMatrix(Av0 + mu * M);
  SparseMatrix Sv = M / dt + th * Av;
  apply_dirichlet(Sv, *space);
  const LinearSolver solve_v =
      projection ? LinearSolver(projection_block(Sv, B, Mc, th * mu, *space), cfg.solve_tolerance)
                 : LinearSolver(Sv, cfg.solve_tolerance);

  Vector u = Vector::Zero(nf);
  if (pcfg.u0_steady_state) {
    SparseMatrix A = Au;
    apply_dirichlet(A, *space);
    u = solve_linear(A, Fu, cfg.solve_tolerance);
  }
  Vector v = Vector::Zero(nf);
  Vector p = Vector::Zero(coarse->num_dofs());  // Π_h v in projection mode

  std::vector<DecaySample> out;
  auto record = [&](double t) {
    const Vector e = u - v;
    out.push_back({t, std::sqrt(std::max(0.0, e.dot(M * e))), std::sqrt(std::max(0.0, e.dot(K * e)))});
  };
  record(0.0);
  const int steps = static_cast<int>(std::lround(pcfg.T / dt));
  for (int s = 1; s <= steps; ++s) {
    Vector ru = M * u / dt - (1.0 - th) * (Au * u) + Fu;
    zero_boundary(ru, *space);
    const Vector u_next = solve_u.solve(ru);

    const Vector coarse_data = R * (th * u_next + (1.0 - th) * u);
    Vector rv = M * v / dt - (1.0 - th) * (Av * v) + Fv + mu * (B * coarse_data);
    if (projection) rv -= (1.0 - th) * mu * (B * p);
    zero_boundary(rv, *space);
    if (projection) {
      Vector full = Vector::Zero(nf + coarse->num_dofs());
      full.head(nf) = rv;
      const Vector x = solve_v.solve(full);
      v = x.head(nf);
      p = x.tail(coarse->num_dofs());
    } else {
      v = solve_v.solve(rv);
    }
    u = u_next;
    record(s * dt);
  }
  return out;
}

void write_decay_csv(std::ostream& os, const std::vector<DecaySample>& series) {
  const auto old = os.precision(17);
  os << "t,l2_err,h1_semi_err\n";
  for (const auto& s : series) os << s.t << ',' << s.l2_err << ',' << s.h1_semi_err << '\n';
  os.precision(old);
}

double fit_decay_rate(const std::vector<DecaySample>& series, double floor_factor) {
  if (series.empty()) throw std::invalid_argument("empty decay series");
  const double floor = floor_factor * series.back().l2_err;
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (const auto& s : series) {
    if (!(s.l2_err > floor) || !(s.l2_err > 0.0)) break;
    const double y = std::log(s.l2_err);
    st += s.t;
    sy += y;
    stt += s.t * s.t;
    sty += s.t * y;
    ++n;
  }
  if (n < 2) throw std::runtime_error("fewer than two samples above the decay floor");
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  return -slope;
}

}  // namespace cda
