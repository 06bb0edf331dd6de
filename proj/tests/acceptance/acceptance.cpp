// Acceptance criteria runner. Prints one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance 3 7        run criteria 3 and 7
//
// Exits non-zero when a criterion fails, unless it is a documented known
// deviation (reported as FAIL with a note, see README).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cda/commands.hpp"
#include "cda/projection.hpp"

using namespace cda;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

const std::set<int> kKnownDeviations{12};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Truth, observation and configs for a named example at the default scale
// (truth n = 256 degree 2, solver n = 64, coarse n = 16, h = 1/8).
struct Example {
  RunConfig cfg;
  ProblemSpec truth;
  Observation obs;

  explicit Example(const std::string& problem)
      : cfg(RunConfig::from_document(
            ConfigDocument::parse_string("[problem]\nname = " + problem + "\n"))),
        truth(cfg.truth_spec()),
        obs(build_observation(solve_forward(truth, cfg.truth_n, cfg.truth_degree),
                              cfg.assimilation.obs)) {}

  double E(Target target, double mu, bool rough = false, int recon_n = 8) const {
    RunConfig c = cfg;
    c.use_rough = rough;
    c.assimilation.mu = mu;
    c.reconstruction.target = target;
    c.reconstruction.recon_n = recon_n;
    return reconstruct(c.model_spec(), c.assimilation, c.reconstruction, obs).error->E;
  }
};

const Example& example(const std::string& name) {
  static std::map<std::string, Example> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, Example(name)).first;
  return it->second;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome fem_convergence() {
  const ProblemSpec s =
      problem_from_expressions("1", "0", "0", "0", "2*pi^2*sin(pi*x)*sin(pi*y)");
  const ScalarField exact = [](const Point& p) {
    return std::sin(M_PI * p.x) * std::sin(M_PI * p.y);
  };
  Outcome o{true, ""};
  for (int degree : {1, 2}) {
    std::vector<double> lh, le;
    for (int n : {8, 16, 32, 64}) {
      lh.push_back(std::log(1.0 / n));
      le.push_back(std::log(relative_error(solve_forward(s, n, degree), exact)));
    }
    const double order = ls_slope(lh, le);
    const double target = degree + 1.0, tol = degree == 1 ? 0.15 : 0.2;
    o.pass = o.pass && within(order, target - tol, target + tol);
    o.detail += "degree " + std::to_string(degree) + " order " + num(order) + " (want " +
                num(target) + " +- " + num(tol) + "); ";
  }
  return o;
}

Outcome fixed_point() {
  const ProblemSpec s = example1_spec();
  const FeFunction u = solve_forward(s, 64, 2);
  AssimilationConfig c;
  c.mu = 1000;
  c.solver_n = 64;
  c.obs.coarse_n = 64;  // coarse degree-2 nodes = every solver dof
  const Observation obs = build_observation(u, c.obs);
  const double rel = l2_distance(u, solve_cda(coefficients_of(s), c, obs)) / l2_norm(u);
  return {rel <= 1e-8, "||u_h - v|| / ||u_h|| = " + num(rel) + " (want <= 1e-8)"};
}

Outcome error_scaling() {
  const ProblemSpec s = example1_spec();
  const FeFunction u = solve_forward(s, 64, 2);
  AssimilationConfig c;
  c.solver_n = 64;
  const Observation obs = build_observation(u, c.obs);
  CdaCoefficients perturbed = coefficients_of(s);
  const ScalarField f = perturbed.f;
  perturbed.f = [f](const Point& p) { return f(p) + 1.0; };
  auto w = [&](double mu) {
    c.mu = mu;
    return l2_distance(u, solve_cda(perturbed, c, obs));
  };
  Outcome o{true, ""};
  for (double mu : {250.0, 500.0, 1000.0}) {
    const double ratio = w(mu) / w(2 * mu);
    o.pass = o.pass && within(ratio, 1.6, 2.4);
    o.detail += "mu " + num(mu) + " ratio " + num(ratio) + "; ";
  }
  o.detail += "want [1.6, 2.4]";
  return o;
}

Outcome decay() {
  const ProblemSpec s = example1_spec();
  Outcome o{true, ""};
  for (double mu : {50.0, 100.0}) {
    AssimilationConfig c;
    c.mu = mu;
    c.solver_n = 32;
    const double rate = fit_decay_rate(solve_parabolic_cda(s, coefficients_of(s), c, ParabolicConfig{}));
    o.pass = o.pass && rate >= mu / 4;
    o.detail += "mu " + num(mu) + " rate " + num(rate) + " (want >= " + num(mu / 4) + "); ";
  }
  return o;
}

Outcome example1_cells() {
  const Example& ex = example("example1");
  const double q1000 = ex.E(Target::Conductivity, 1000), f1000 = ex.E(Target::Source, 1000);
  const double q1 = ex.E(Target::Conductivity, 1), q5e4 = ex.E(Target::Conductivity, 5e4);
  const bool pass = within(q1000, 1.2e-2, 4.8e-2) && within(f1000, 0.58e-2, 2.4e-2) &&
                    q1 >= 7e-2 && q5e4 >= 8e-2;
  return {pass, "E_q(1000) " + num(q1000) + " in [0.012, 0.048]; E_f(1000) " + num(f1000) +
                    " in [0.0058, 0.024]; E_q(1) " + num(q1) + " >= 0.07; E_q(5e4) " +
                    num(q5e4) + " >= 0.08"};
}

Outcome rough() {
  const Example& ex = example("example1");
  const double exact = ex.E(Target::Conductivity, 1000), r = ex.E(Target::Conductivity, 1000, true);
  return {r <= 2.5 * exact,
          "E_q rough " + num(r) + " vs exact " + num(exact) + " (want ratio <= 2.5, got " +
              num(r / exact) + ")"};
}

Outcome example2_cells() {
  const Example& ex = example("example2");
  const double q = ex.E(Target::Conductivity, 1000), f = ex.E(Target::Source, 1000);
  return {within(q, 0.86e-2, 3.5e-2) && within(f, 0.86e-2, 3.5e-2),
          "E_q " + num(q) + ", E_f " + num(f) + " (want [0.0086, 0.035])"};
}

Outcome interpolation() {
  const ProblemSpec e1 = example1_spec(), e2 = example2_spec();
  struct Row {
    const char* name;
    ScalarField g;
    double reference;
  };
  Outcome o{true, ""};
  for (const Row& r : {Row{"Ex1 q", e1.q.field(), 3.46e-2}, Row{"Ex1 f", e1.f.field(), 0.97e-2},
                       Row{"Ex2 q", e2.q.field(), 2.41e-2}, Row{"Ex2 f", e2.f.field(), 1.45e-2}}) {
    const double e = interpolation_reference(r.g, 8);
    o.pass = o.pass && std::abs(e - r.reference) <= 0.15 * r.reference;
    o.detail += std::string(r.name) + " " + num(e) + " (reference " + num(r.reference) + "); ";
  }
  o.detail += "want +-15%";
  return o;
}

Outcome noise() {
  const RunConfig cfg = RunConfig::from_document(ConfigDocument::parse_file(
      std::string(CDA_SOURCE_DIR) + "/configs/sweep_noise_example1.cfg"));
  const auto means = noise_means(sweep_noise(cfg, 1));
  Outcome o{true, ""};
  for (Target t : cfg.targets) {
    std::vector<double> delta, mean;
    for (const auto& m : means) {
      if (m.target != t) continue;
      delta.push_back(m.delta);
      mean.push_back(m.mean);
    }
    const double rho = spearman(delta, mean);
    const double ratio = mean.back() / mean.front();
    o.pass = o.pass && rho >= 0.8 && ratio <= 6.0;
    o.detail += "E_" + to_string(t) + " spearman " + num(rho) + " ratio " + num(ratio) + "; ";
  }
  o.detail += "want rho >= 0.8, ratio <= 6";
  return o;
}

Outcome positivity() {
  Outcome o{true, ""};
  struct Row {
    const char* problem;
    PositivityCondition cond;
    double c, beta;
  };
  for (const Row& r : {Row{"example1", PositivityCondition::PC1, 0.05, 1},
                       Row{"example2", PositivityCondition::PC1, 0.05, 1},
                       Row{"example1", PositivityCondition::PC2, 0.25, 2},
                       Row{"example2", PositivityCondition::PC2, 0.3, 2}}) {
    const ProblemSpec s = problem_by_name(r.problem);
    const FeFunction u = solve_forward(s, 256, 2);
    const bool pc1 = r.cond == PositivityCondition::PC1;
    const PositivityReport rep = pc1 ? verify_pc1(u, r.c, r.beta) : verify_pc2(u, r.c, r.beta);
    o.pass = o.pass && rep.holds;
    o.detail += std::string(r.problem) + (pc1 ? " PC1 " : " PC2 ") + (rep.holds ? "holds" : "fails") +
                " (min slack " + num(rep.min_slack) + "); ";
  }
  return o;
}

Outcome ode() {
  struct Row {
    double c1, c2, M, beta, xi;
  };
  Outcome o{true, ""};
  for (const Row& r : {Row{2, 1, 3, 0, 3}, Row{1, 0, 4, 1, 2}, Row{1, 1, 2, 1, 2}}) {
    const OdeBoundProblem p{r.c1, r.c2, r.M, r.beta};
    const double xi = xi_star(p);
    o.pass = o.pass && std::abs(xi - r.xi) <= 1e-10;
    double worst = 0;
    for (double theta0 : {0.0, 2 * xi}) {
      const auto traj = simulate_ode_bound(p, theta0, 50.0, 1e-2);
      worst = std::max(worst, std::abs(traj.back().theta - xi));
    }
    o.pass = o.pass && worst <= 1e-6;
    o.detail += "xi* " + num(xi) + " (want " + num(r.xi) + "), limit gap " + num(worst) + "; ";
  }
  return o;
}

Outcome oscillation() {
  const Example& ex = example("example1");
  const double e8 = ex.E(Target::Conductivity, 1000, false, 8);
  const double e16 = ex.E(Target::Conductivity, 1000, false, 16);
  return {e16 >= e8, "E_q(h=1/16) " + num(e16) + " vs E_q(h=1/8) " + num(e8) + " (want >=)"};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "FEM convergence", 30, fem_convergence},
      {2, "feedback fixed point", 10, fixed_point},
      {3, "feedback error scaling", 60, error_scaling},
      {4, "parabolic decay", 120, decay},
      {5, "Example 1 mu sweep cells", 600, example1_cells},
      {6, "rough b, c robustness", 300, rough},
      {7, "Example 2 spot checks", 600, example2_cells},
      {8, "interpolation reference", 60, interpolation},
      {9, "noise monotonicity", 1800, noise},
      {10, "positivity conditions", 120, positivity},
      {11, "xi* and ODE bound", 5, ode},
      {12, "fine-mesh oscillation", 600, oscillation},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool ok = true;
  for (const Criterion& c : criteria()) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.detail.size() >= 2 && o.detail.ends_with("; ")) o.detail.resize(o.detail.size() - 2);
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    const bool known = !pass && kKnownDeviations.count(c.id);
    std::printf("criterion %2d %s: %s [%s] %.1f s of %.0f s budget\n", c.id, c.name,
                pass ? "PASS" : (known ? "FAIL (known deviation)" : "FAIL"), o.detail.c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
    if (!pass && !known) ok = false;
  }
  return ok ? 0 : 1;
}
