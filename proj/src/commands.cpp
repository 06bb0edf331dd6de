#include "cda/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "cda/errors.hpp"
#include "cda/linear_solver.hpp"
#include "cda/projection.hpp"

#ifndef CDA_SOURCE_DIR
#define CDA_SOURCE_DIR "."
#endif

namespace cda {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string csv_number(double v) { return format_double(v); }

// Serializes log lines from worker threads.
class Logger {
 public:
  explicit Logger(std::ostream* os) : os_(os) {}
  void operator()(const std::string& line) const {
    if (!os_) return;
    std::lock_guard lock(mutex_);
    *os_ << line << '\n' << std::flush;
  }

 private:
  std::ostream* os_;
  mutable std::mutex mutex_;
};

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// processed exactly once; exceptions must be handled inside body.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  const int workers = std::clamp(jobs, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// The CDA stability conditions involve constants the theory never computes,
// so they are only reported.
void advisory_warnings(const RunConfig& cfg, double mu, const Logger& log) {
  const double h = 1.0 / cfg.assimilation.obs.coarse_n;
  if (mu * h * h > 1.0) {
    log("warning: mu*h^2 = " + csv_number(mu * h * h) +
        " > 1 (mu = " + csv_number(mu) + ", h = 1/" +
        std::to_string(cfg.assimilation.obs.coarse_n) +
        "); the feedback may exceed what the observation mesh resolves");
  }
}

FeFunction truth_solution(const RunConfig& cfg, const Logger& log) {
  log("solving truth: " + cfg.problem + ", n = " + std::to_string(cfg.truth_n) +
      ", degree " + std::to_string(cfg.truth_degree));
  return solve_forward(cfg.truth_spec(), cfg.truth_n, cfg.truth_degree,
                       cfg.assimilation.solve_tolerance);
}

ProblemSpec variant_spec(const RunConfig& cfg, bool rough) {
  RunConfig v = cfg;
  v.use_rough = rough;
  return v.model_spec();
}

struct Writer {
  fs::path dir;
  std::vector<std::string>& files;

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    files.push_back(name);
    return os;
  }
};

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                    const std::vector<std::uint64_t>& seeds, const std::string& started,
                    const std::vector<std::string>& files, const std::string& status) {
  ConfigDocument doc;
  doc.set("run", "command", command);
  doc.set("run", "version", kVersion);
  doc.set("run", "started", started);
  doc.set("run", "finished", timestamp());
  doc.set("run", "backend", LinearSolver::backend_name());
  std::string s;
  for (auto seed : seeds) s += (s.empty() ? "" : ", ") + std::to_string(seed);
  doc.set("run", "seeds", s);
  doc.set("run", "status", status);
  for (size_t i = 0; i < files.size(); ++i) doc.set("files", "file" + std::to_string(i), files[i]);
  doc.set("files", "manifest", "manifest.txt");
  const ConfigDocument resolved = cfg.to_document();
  for (const auto& [section, entries] : resolved.sections())
    for (const auto& [k, v] : entries) doc.set(section, k, v);
  std::ofstream os(dir / "manifest.txt");
  os << doc.serialize();
}

ReconstructionResult reconstruct_with(const RunConfig& cfg, const ProblemSpec& model,
                                      const Observation& obs, Target target, double mu,
                                      std::optional<int> recon_n = std::nullopt) {
  AssimilationConfig acfg = cfg.assimilation;
  acfg.mu = mu;
  acfg.obs.delta = obs.delta;
  acfg.obs.seed = obs.seed;
  ReconstructionConfig rcfg = cfg.reconstruction;
  rcfg.target = target;
  if (recon_n) rcfg.recon_n = *recon_n;
  return reconstruct(model, acfg, rcfg, obs);
}

// ---- commands ---------------------------------------------------------------

void cmd_forward(const RunConfig& cfg, Writer& w, const Logger& log) {
  const FeFunction u = truth_solution(cfg, log);
  {
    auto os = w.open("forward.fe");
    dump_fe_function(os, u);
  }
  auto os = w.open("forward.csv");
  os << "problem,n,degree,dofs,max_value,l2_norm\n"
     << cfg.problem << ',' << cfg.truth_n << ',' << cfg.truth_degree << ','
     << u.coefficients().size() << ',' << csv_number(u.coefficients().maxCoeff()) << ','
     << csv_number(l2_norm(u)) << '\n';
}

void cmd_reconstruct(const RunConfig& cfg, Writer& w, const Logger& log) {
  const AssimilationConfig& acfg = cfg.assimilation;
  const ReconstructionConfig& rcfg = cfg.reconstruction;
  advisory_warnings(cfg, acfg.mu, log);
  const FeFunction u = truth_solution(cfg, log);
  const Observation obs = build_observation(u, acfg.obs);
  const ProblemSpec model = cfg.model_spec();
  log("reconstructing " + to_string(rcfg.target) + ", mu = " + csv_number(acfg.mu) +
      ", h = 1/" + std::to_string(rcfg.recon_n));
  const ReconstructionResult r = reconstruct(model, acfg, rcfg, obs);
  {
    auto os = w.open("estimate.fe");
    dump_fe_function(os, r.estimate);
  }
  {
    auto os = w.open("history.csv");
    write_history_csv(os, r);
  }
  {
    auto os = w.open("result.csv");
    os << result_manifest_header() << '\n' << result_manifest_row(r, acfg, rcfg) << '\n';
  }
  {
    auto os = w.open("error.csv");
    os << error_report_header() << ",iterations\n" << error_report_row(*r.error) << ','
       << r.iterations << '\n';
  }
  log("E = " + csv_number(r.error->E) + " (interpolation " + csv_number(r.error->E_ref) +
      "), " + std::to_string(r.iterations) + " iterations, stop: " + to_string(r.stop_reason));

  if (rcfg.recon_n > 8) {
    // Finer reconstruction meshes are prone to oscillation: compare with h = 1/8.
    log("reference reconstruction at h = 1/8");
    const ReconstructionResult base = reconstruct_with(cfg, model, obs, rcfg.target, acfg.mu, 8);
    const bool flag = r.error->E > base.error->E;
    auto os = w.open("oscillation.csv");
    os << "h_recon,E,E_h8,oscillation_flag\n"
       << csv_number(1.0 / rcfg.recon_n) << ',' << csv_number(r.error->E) << ','
       << csv_number(base.error->E) << ',' << (flag ? "true" : "false") << '\n';
    if (flag) log("oscillation flag: E exceeds the h = 1/8 result");
  }
}

std::vector<std::string> cmd_sweep_mu(const RunConfig& cfg, const CommandOptions& opt, Writer& w,
                                      std::ostream* log_stream) {
  const std::vector<SweepMuRow> rows = sweep_mu(cfg, opt.jobs, log_stream);
  {
    auto os = w.open("sweep_mu.csv");
    os << "row,target,coefficients,mu,E,E_ref,ratio,stop_reason,iterations\n";
    for (const auto& r : rows) {
      os << r.label() << ',' << to_string(r.target) << ',' << (r.rough ? "rough" : "exact") << ','
         << csv_number(r.mu) << ',' << csv_number(r.E) << ',' << csv_number(r.E_ref) << ','
         << csv_number(r.E / r.E_ref) << ',' << r.stop_reason << ',' << r.iterations << '\n';
    }
  }
  {
    // Wide layout: one row per variant, one column per μ.
    auto os = w.open("sweep_mu_table.csv");
    os << "row";
    for (double mu : cfg.mu_values) os << ",mu=" << csv_number(mu);
    os << '\n';
    for (size_t i = 0; i < rows.size(); i += cfg.mu_values.size()) {
      os << rows[i].label();
      for (size_t j = 0; j < cfg.mu_values.size(); ++j) os << ',' << csv_number(rows[i + j].E);
      os << '\n';
    }
  }
  if (!opt.check) return {};
  fs::path dir;
  if (opt.expected_dir) {
    dir = *opt.expected_dir;
  } else if (const char* env = std::getenv("CDA_EXPECTED_DIR")) {
    dir = env;
  } else {
    dir = fs::path(CDA_SOURCE_DIR) / "configs" / "expected";
  }
  const fs::path file = dir / (cfg.problem + "_sweep_mu.csv");
  if (!fs::exists(file)) return {"no expected-range file " + file.string()};
  return check_sweep_mu(rows, read_expected_ranges(file));
}

std::vector<std::string> cmd_sweep_noise(const RunConfig& cfg, const CommandOptions& opt,
                                         Writer& w, std::ostream* log_stream) {
  const std::vector<NoiseRow> rows = sweep_noise(cfg, opt.jobs, log_stream);
  {
    auto os = w.open("sweep_noise.csv");
    os << "target,mu,delta,seed,E,stop_reason,iterations\n";
    for (const auto& r : rows) {
      os << to_string(r.target) << ',' << csv_number(r.mu) << ',' << csv_number(r.delta) << ','
         << r.seed << ',' << csv_number(r.E) << ',' << r.stop_reason << ',' << r.iterations << '\n';
    }
  }
  const std::vector<NoiseMean> means = noise_means(rows);
  {
    auto os = w.open("sweep_noise_mean.csv");
    os << "target,mu,delta,mean_E,min_E,max_E,runs\n";
    for (const auto& m : means) {
      os << to_string(m.target) << ',' << csv_number(m.mu) << ',' << csv_number(m.delta) << ','
         << csv_number(m.mean) << ',' << csv_number(m.min) << ',' << csv_number(m.max) << ','
         << m.count << '\n';
    }
  }
  std::vector<std::string> failures;
  auto os = w.open("sweep_noise_summary.csv");
  os << "target,spearman,E_max_delta_over_E_zero\n";
  for (Target t : cfg.targets) {
    std::vector<double> d, e;
    double e0 = kNaN, e_last = kNaN;
    for (const auto& m : means) {
      if (m.target != t) continue;
      d.push_back(m.delta);
      e.push_back(m.mean);
      if (m.delta == 0.0) e0 = m.mean;
      e_last = m.mean;
    }
    const double rho = spearman(d, e);
    const double growth = e_last / e0;
    os << to_string(t) << ',' << csv_number(rho) << ',' << csv_number(growth) << '\n';
    if (opt.check) {
      if (!(rho >= 0.8)) {
        failures.push_back("E_" + to_string(t) + ": Spearman rho " + csv_number(rho) + " < 0.8");
      }
      if (!(growth <= 6.0)) {
        failures.push_back("E_" + to_string(t) + ": E(delta_max)/E(0) = " + csv_number(growth) +
                           " > 6");
      }
    }
  }
  return failures;
}

std::vector<std::string> cmd_verify_pc(const RunConfig& cfg, const CommandOptions& opt, Writer& w,
                                       const Logger& log) {
  const FeFunction u = truth_solution(cfg, log);
  const PositivityReport r = cfg.pc_condition == PositivityCondition::PC1
                                 ? verify_pc1(u, cfg.pc_c, cfg.pc_beta, cfg.pc_grid_n)
                                 : verify_pc2(u, cfg.pc_c, cfg.pc_beta, cfg.pc_grid_n);
  auto os = w.open("positivity.csv");
  os << positivity_header() << '\n' << positivity_row(r) << '\n';
  log(std::string(r.holds ? "holds" : "fails") + ": min slack " + csv_number(r.min_slack));
  if (opt.check && !r.holds) return {"positivity condition fails, min slack " + csv_number(r.min_slack)};
  return {};
}

std::vector<std::string> cmd_decay(const RunConfig& cfg, const CommandOptions& opt, Writer& w,
                                   const Logger& log) {
  const AssimilationConfig& acfg = cfg.assimilation;
  if (acfg.mu * cfg.parabolic.dt > 1.0) {
    log("warning: mu*dt = " + csv_number(acfg.mu * cfg.parabolic.dt) +
        " > 1; the time step may not resolve the decay");
  }
  advisory_warnings(cfg, acfg.mu, log);
  const auto series =
      solve_parabolic_cda(cfg.truth_spec(), coefficients_of(cfg.model_spec()), acfg, cfg.parabolic);
  {
    auto os = w.open("decay.csv");
    write_decay_csv(os, series);
  }
  const double rate = fit_decay_rate(series);
  auto os = w.open("decay_rate.csv");
  os << "mu,rate,mu_over_4\n"
     << csv_number(acfg.mu) << ',' << csv_number(rate) << ',' << csv_number(acfg.mu / 4) << '\n';
  log("fitted decay rate " + csv_number(rate) + " (mu/4 = " + csv_number(acfg.mu / 4) + ")");
  if (opt.check && !(rate >= acfg.mu / 4)) {
    return {"decay rate " + csv_number(rate) + " < mu/4 = " + csv_number(acfg.mu / 4)};
  }
  return {};
}

void cmd_xistar(const RunConfig& cfg, Writer& w, const Logger& log) {
  const double xi = xi_star(cfg.ode);
  {
    auto os = w.open("xistar.csv");
    os << "c1,c2,M,beta,xi_star\n"
       << csv_number(cfg.ode.c1) << ',' << csv_number(cfg.ode.c2) << ',' << csv_number(cfg.ode.M)
       << ',' << csv_number(cfg.ode.beta) << ',' << csv_number(xi) << '\n';
  }
  const auto traj = simulate_ode_bound(cfg.ode, cfg.ode_theta0, cfg.ode_z_end, cfg.ode_dz);
  auto os = w.open("ode_bound.csv");
  os << "z,theta\n";
  for (const auto& s : traj) os << csv_number(s.z) << ',' << csv_number(s.theta) << '\n';
  log("xi* = " + csv_number(xi) + ", theta(" + csv_number(traj.back().z) + ") = " +
      csv_number(traj.back().theta));
}

}  // namespace

// ---- sweeps -----------------------------------------------------------------

std::string SweepMuRow::label() const {
  return "E_" + to_string(target) + (rough ? "(rough)" : "(exact)");
}

std::vector<SweepMuRow> sweep_mu(const RunConfig& cfg, int jobs, std::ostream* log_stream) {
  const Logger log(log_stream);
  const bool have_rough = cfg.rough_b1 && cfg.rough_b2 && cfg.rough_c;
  std::vector<SweepMuRow> rows;
  for (Target t : cfg.targets) {
    for (bool rough : {false, true}) {
      if (rough && !have_rough) continue;
      for (double mu : cfg.mu_values) {
        SweepMuRow r;
        r.target = t;
        r.rough = rough;
        r.mu = mu;
        rows.push_back(r);
      }
    }
  }
  for (double mu : cfg.mu_values) advisory_warnings(cfg, mu, log);
  const FeFunction u = truth_solution(cfg, log);
  const Observation obs = build_observation(u, cfg.assimilation.obs);
  const ProblemSpec exact = variant_spec(cfg, false);
  const std::optional<ProblemSpec> rough =
      have_rough ? std::optional(variant_spec(cfg, true)) : std::nullopt;

  parallel_for(static_cast<int>(rows.size()), jobs, [&](int i) {
    SweepMuRow& r = rows[i];
    try {
      const auto res = reconstruct_with(cfg, r.rough ? *rough : exact, obs, r.target, r.mu);
      r.E = res.error->E;
      r.E_ref = res.error->E_ref;
      r.stop_reason = to_string(res.stop_reason);
      r.iterations = res.iterations;
    } catch (const std::exception& e) {
      r.E = r.E_ref = kNaN;
      r.stop_reason = "failed";
      r.error = e.what();
    }
    log(r.label() + " mu = " + csv_number(r.mu) + ": E = " + csv_number(r.E) + " (" +
        r.stop_reason + (r.error.empty() ? "" : ": " + r.error) + ")");
  });
  return rows;
}

std::vector<NoiseRow> sweep_noise(const RunConfig& cfg, int jobs, std::ostream* log_stream) {
  const Logger log(log_stream);
  const FeFunction u = truth_solution(cfg, log);
  const ProblemSpec model = cfg.model_spec();
  std::vector<NoiseRow> rows;
  for (Target t : cfg.targets) {
    const double mu = t == Target::Conductivity ? cfg.noise_mu_q : cfg.noise_mu_f;
    advisory_warnings(cfg, mu, log);
    for (double delta : cfg.delta_values) {
      for (auto seed : cfg.seeds) {
        NoiseRow r;
        r.target = t;
        r.mu = mu;
        r.delta = delta;
        r.seed = seed;
        rows.push_back(r);
      }
    }
  }
  // Noise-free data do not depend on the seed: run the first such row of each
  // target and copy it into the others.
  std::vector<int> work;
  std::map<int, int> copy_from;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    if (rows[i].delta == 0.0) {
      int first = -1;
      for (int j = 0; j < i && first < 0; ++j)
        if (rows[j].delta == 0.0 && rows[j].target == rows[i].target) first = j;
      if (first >= 0) {
        copy_from[i] = first;
        continue;
      }
    }
    work.push_back(i);
  }
  parallel_for(static_cast<int>(work.size()), jobs, [&](int k) {
    NoiseRow& r = rows[work[k]];
    try {
      ObservationSpec ospec = cfg.assimilation.obs;
      ospec.delta = r.delta;
      ospec.seed = r.seed;
      const Observation obs = build_observation(u, ospec);
      const auto res = reconstruct_with(cfg, model, obs, r.target, r.mu);
      r.E = res.error->E;
      r.stop_reason = to_string(res.stop_reason);
      r.iterations = res.iterations;
    } catch (const std::exception& e) {
      r.E = kNaN;
      r.stop_reason = "failed";
      r.error = e.what();
    }
    log("E_" + to_string(r.target) + " delta = " + csv_number(r.delta) + " seed " +
        std::to_string(r.seed) + ": E = " + csv_number(r.E) + " (" + r.stop_reason +
        (r.error.empty() ? "" : ": " + r.error) + ")");
  });
  for (const auto& [i, j] : copy_from) {
    const std::uint64_t seed = rows[i].seed;
    rows[i] = rows[j];
    rows[i].seed = seed;
  }
  return rows;
}

std::vector<NoiseMean> noise_means(const std::vector<NoiseRow>& rows) {
  std::vector<NoiseMean> out;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const NoiseMean& m) {
      return m.target == r.target && m.mu == r.mu && m.delta == r.delta;
    });
    if (it == out.end()) {
      NoiseMean m;
      m.target = r.target;
      m.mu = r.mu;
      m.delta = r.delta;
      m.mean = 0.0;
      m.min = std::numeric_limits<double>::infinity();
      m.max = -std::numeric_limits<double>::infinity();
      out.push_back(m);
      it = std::prev(out.end());
    }
    if (std::isnan(r.E)) continue;
    it->mean += r.E;
    it->min = std::min(it->min, r.E);
    it->max = std::max(it->max, r.E);
    ++it->count;
  }
  for (auto& m : out) {
    if (m.count == 0) {
      m.mean = m.min = m.max = kNaN;
    } else {
      m.mean /= m.count;
    }
  }
  return out;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return kNaN;
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (size_t i = 0; i < idx.size();) {
      size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<ExpectedRange> read_expected_ranges(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("expected", "cannot open expected-range file '" + path.string() + "'");
  std::vector<ExpectedRange> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1 || line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    const std::string loc = path.string() + ":" + std::to_string(lineno);
    if (f.size() != 6) throw ConfigError("expected", loc + ": expected 6 fields");
    try {
      ExpectedRange e;
      e.row = f[0];
      e.mu = std::stod(f[1]);
      e.reference = std::stod(f[2]);
      e.lo = std::stod(f[3]);
      e.hi = std::stod(f[4]);
      e.checked = f[5] == "true" || f[5] == "1" || f[5] == "yes";
      out.push_back(e);
    } catch (const std::logic_error&) {
      throw ConfigError("expected", loc + ": malformed number");
    }
  }
  return out;
}

std::vector<std::string> check_sweep_mu(const std::vector<SweepMuRow>& rows,
                                        const std::vector<ExpectedRange>& expected) {
  std::vector<std::string> failures;
  for (const auto& e : expected) {
    if (!e.checked) continue;
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const SweepMuRow& r) {
      return r.label() == e.row && r.mu == e.mu;
    });
    // Cells the sweep did not run (other μ grid or targets) are not checked.
    if (it == rows.end()) continue;
    const std::string cell = e.row + " mu = " + csv_number(e.mu);
    if (std::isnan(it->E)) {
      failures.push_back(cell + ": run failed (" + it->error + ")");
    } else if (it->E < e.lo || it->E > e.hi) {
      failures.push_back(cell + ": E = " + csv_number(it->E) + " outside [" + csv_number(e.lo) +
                         ", " + csv_number(e.hi) + "] (reference " + csv_number(e.reference) + ")");
    }
  }
  return failures;
}

// ---- dispatch ---------------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"forward",   "reconstruct", "sweep-mu", "sweep-noise",
                                              "verify-pc", "decay",       "xistar"};
  return names;
}

CommandOutcome run_command(const std::string& command, RunConfig cfg, const CommandOptions& opt) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw ConfigError("command", "unknown command '" + command + "'");
  }
  if (opt.jobs < 1) throw ConfigError("jobs", "jobs: must be at least 1");
  if (opt.out_dir) cfg.output_dir = opt.out_dir->string();
  if (opt.seed) {
    cfg.assimilation.obs.seed = *opt.seed;
    for (size_t i = 0; i < cfg.seeds.size(); ++i) cfg.seeds[i] = *opt.seed + i;
  }
  std::vector<std::uint64_t> seeds{cfg.assimilation.obs.seed};
  if (command == "sweep-noise") seeds = cfg.seeds;

  CommandOutcome out;
  out.out_dir = cfg.output_dir;
  fs::create_directories(out.out_dir);
  const std::string started = timestamp();
  const Logger log(opt.log);
  Writer w{out.out_dir, out.files};
  try {
    if (command == "forward") cmd_forward(cfg, w, log);
    else if (command == "reconstruct") cmd_reconstruct(cfg, w, log);
    else if (command == "sweep-mu") out.check_failures = cmd_sweep_mu(cfg, opt, w, opt.log);
    else if (command == "sweep-noise") out.check_failures = cmd_sweep_noise(cfg, opt, w, opt.log);
    else if (command == "verify-pc") out.check_failures = cmd_verify_pc(cfg, opt, w, log);
    else if (command == "decay") out.check_failures = cmd_decay(cfg, opt, w, log);
    else cmd_xistar(cfg, w, log);
  } catch (const std::exception& e) {
    write_manifest(out.out_dir, command, cfg, seeds, started, out.files,
                   std::string("error: ") + e.what());
    throw;
  }
  std::string status = "ok";
  if (opt.check) status = out.check_passed() ? "check passed" : "check failed";
  write_manifest(out.out_dir, command, cfg, seeds, started, out.files, status);
  out.files.push_back("manifest.txt");
  return out;
}

}  // namespace cda
