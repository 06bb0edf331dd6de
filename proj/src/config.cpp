#include "cda/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cda/errors.hpp"
#include "cda/expression.hpp"

namespace cda {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest text that reads back to the same double.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(FeedbackMode m) {
  return m == FeedbackMode::Interpolation ? "interpolation" : "projection";
}

std::string to_string(MisfitMode m) { return m == MisfitMode::Interpolated ? "interpolated" : "raw"; }

ConfigDocument ConfigDocument::parse(std::istream& is, const std::string& origin) {
  ConfigDocument doc;
  std::string line;
  int lineno = 0;
  std::string section;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string loc = origin + ":" + std::to_string(lineno);
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("", loc + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("", loc + ": empty section name");
      if (!doc.has_section(section)) doc.sections_.push_back({section, {}});
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("", loc + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("", loc + ": empty key");
    if (section.empty()) throw ConfigError(key, loc + ": key '" + key + "' outside any section");
    if (doc.get(section, key)) {
      throw ConfigError(key, loc + ": duplicate key '" + key + "' in [" + section + "]");
    }
    doc.set(section, key, value);
    doc.locations_.push_back({section + "." + key, loc});
  }
  return doc;
}

ConfigDocument ConfigDocument::parse_string(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  return parse(is, origin);
}

ConfigDocument ConfigDocument::parse_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot open config file '" + path.string() + "'");
  return parse(is, path.string());
}

bool ConfigDocument::has_section(const std::string& section) const {
  return std::any_of(sections_.begin(), sections_.end(),
                     [&](const auto& s) { return s.first == section; });
}

std::optional<std::string> ConfigDocument::get(const std::string& section,
                                               const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries)
      if (k == key) return v;
  }
  return std::nullopt;
}

void ConfigDocument::set(const std::string& section, const std::string& key,
                         const std::string& value) {
  auto it = std::find_if(sections_.begin(), sections_.end(),
                         [&](const auto& s) { return s.first == section; });
  if (it == sections_.end()) {
    sections_.push_back({section, {}});
    it = std::prev(sections_.end());
  }
  for (auto& [k, v] : it->second) {
    if (k == key) {
      v = value;
      return;
    }
  }
  it->second.push_back({key, value});
}

std::string ConfigDocument::where(const std::string& section, const std::string& key) const {
  for (const auto& [k, loc] : locations_)
    if (k == section + "." + key) return loc;
  return {};
}

std::string ConfigDocument::serialize() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, entries] : sections_) {
    if (!first) os << '\n';
    first = false;
    os << '[' << name << "]\n";
    for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
  }
  return os.str();
}

namespace {

// Typed access to one section with "where" diagnostics and unknown-key checks.
class SectionReader {
 public:
  SectionReader(const ConfigDocument& doc, std::string section, std::set<std::string> known)
      : doc_(doc), section_(std::move(section)), known_(std::move(known)) {
    for (const auto& [name, entries] : doc_.sections()) {
      if (name != section_) continue;
      for (const auto& [k, v] : entries) {
        if (!known_.count(k)) fail(k, "unknown key '" + k + "' in [" + section_ + "]");
      }
    }
  }

  std::optional<std::string> raw(const std::string& key) const { return doc_.get(section_, key); }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string loc = doc_.where(section_, key);
    throw ConfigError(key, (loc.empty() ? "" : loc + ": ") + what);
  }

  double number(const std::string& key, double fallback) const {
    const auto v = raw(key);
    return v ? parse_number(key, *v) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) const {
    const auto v = raw(key);
    if (!v || *v == "auto") return std::nullopt;
    return parse_number(key, *v);
  }

  int integer(const std::string& key, int fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    int out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
      fail(key, key + ": expected an integer, got '" + *v + "'");
    }
    return out;
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) const {
    const auto v = raw(key);
    return v ? parse_u64(key, *v) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1" || *v == "on") return true;
    if (*v == "false" || *v == "no" || *v == "0" || *v == "off") return false;
    fail(key, key + ": expected true or false, got '" + *v + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_number(key, item));
    if (out.empty()) fail(key, key + ": empty list");
    return out;
  }

  std::vector<std::uint64_t> unsigned_list(const std::string& key,
                                           const std::vector<std::uint64_t>& fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_u64(key, item));
    if (out.empty()) fail(key, key + ": empty list");
    return out;
  }

 private:
  double parse_number(const std::string& key, const std::string& s) const {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(out)) {
      fail(key, key + ": expected a finite number, got '" + s + "'");
    }
    return out;
  }

  std::uint64_t parse_u64(const std::string& key, const std::string& s) const {
    std::uint64_t out = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(key, key + ": expected an unsigned 64-bit integer, got '" + s + "'");
    }
    return out;
  }

  const ConfigDocument& doc_;
  std::string section_;
  std::set<std::string> known_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

std::optional<std::array<double, 3>> default_rough_coefficients(const std::string& problem) {
  if (problem == "example1") return std::array<double, 3>{3.5, 3.5, 3.0};
  if (problem == "example2") return std::array<double, 3>{2.5, 2.5, 2.8};
  return std::nullopt;
}

RunConfig RunConfig::from_document(const ConfigDocument& doc) {
  static const std::set<std::string> sections{"problem",  "assimilation", "reconstruction",
                                              "parabolic", "positivity",  "ode",
                                              "sweep",    "output",       "run",
                                              "files"};
  for (const auto& [name, entries] : doc.sections()) {
    if (!sections.count(name)) throw ConfigError(name, "unknown section [" + name + "]");
  }
  RunConfig c;

  const SectionReader p(doc, "problem",
                        {"name", "q", "b1", "b2", "c", "f", "rough_b1", "rough_b2", "rough_c",
                         "use_rough", "truth_n", "truth_degree"});
  c.problem = p.text("name", c.problem);
  const bool custom = c.problem == "custom";
  if (!custom) {
    const auto known = known_problem_names();
    if (std::find(known.begin(), known.end(), c.problem) == known.end()) {
      p.fail("name", "name: unknown problem '" + c.problem + "' (known: " + join(known) +
                         ", custom)");
    }
  }
  for (const char* k : {"q", "b1", "b2", "c", "f"}) {
    if (!custom && p.raw(k)) p.fail(k, std::string(k) + ": inline expressions need name = custom");
    if (custom && !p.raw(k)) p.fail(k, std::string(k) + ": required when name = custom");
  }
  if (custom) {
    c.q_expr = *p.raw("q");
    c.b1_expr = *p.raw("b1");
    c.b2_expr = *p.raw("b2");
    c.c_expr = *p.raw("c");
    c.f_expr = *p.raw("f");
    for (const char* k : {"q", "b1", "b2", "c", "f"}) {
      try {
        (void)Expression::parse(*p.raw(k));
      } catch (const ExpressionError& e) {
        p.fail(k, std::string(k) + ": " + e.what());
      }
    }
  }
  c.rough_b1 = p.optional_number("rough_b1");
  c.rough_b2 = p.optional_number("rough_b2");
  c.rough_c = p.optional_number("rough_c");
  if (!c.rough_b1 && !c.rough_b2 && !c.rough_c) {
    if (auto r = default_rough_coefficients(c.problem)) {
      c.rough_b1 = (*r)[0];
      c.rough_b2 = (*r)[1];
      c.rough_c = (*r)[2];
    }
  } else if (!(c.rough_b1 && c.rough_b2 && c.rough_c)) {
    p.fail("rough_c", "rough_b1, rough_b2 and rough_c must be given together");
  }
  c.use_rough = p.boolean("use_rough", false);
  if (c.use_rough && !c.rough_c) p.fail("use_rough", "use_rough: no rough coefficients given");
  c.truth_n = p.integer("truth_n", c.truth_n);
  c.truth_degree = p.integer("truth_degree", c.truth_degree);
  if (c.truth_n < 1) p.fail("truth_n", "truth_n: must be positive");
  if (c.truth_degree != 1 && c.truth_degree != 2) p.fail("truth_degree", "truth_degree: must be 1 or 2");

  const SectionReader a(doc, "assimilation",
                        {"mu", "feedback_mode", "misfit", "solver_n", "solver_degree",
                         "coarse_n", "delta", "seed", "solve_tolerance"});
  AssimilationConfig& ac = c.assimilation;
  ac.mu = a.number("mu", ac.mu);
  const std::string fm = a.text("feedback_mode", to_string(ac.feedback_mode));
  if (fm == "interpolation") ac.feedback_mode = FeedbackMode::Interpolation;
  else if (fm == "projection") ac.feedback_mode = FeedbackMode::Projection;
  else a.fail("feedback_mode", "feedback_mode: expected interpolation or projection, got '" + fm + "'");
  const std::string mm = a.text("misfit", to_string(ac.misfit_mode));
  if (mm == "interpolated") ac.misfit_mode = MisfitMode::Interpolated;
  else if (mm == "raw") ac.misfit_mode = MisfitMode::Raw;
  else a.fail("misfit", "misfit: expected interpolated or raw, got '" + mm + "'");
  ac.solver_n = a.integer("solver_n", ac.solver_n);
  ac.solver_degree = a.integer("solver_degree", ac.solver_degree);
  ac.obs.coarse_n = a.integer("coarse_n", ac.obs.coarse_n);
  ac.obs.delta = a.number("delta", ac.obs.delta);
  ac.obs.seed = a.unsigned64("seed", ac.obs.seed);
  ac.solve_tolerance = a.number("solve_tolerance", ac.solve_tolerance);
  try {
    ac.validate();
  } catch (const ConfigError& e) {
    a.fail(e.field(), e.what());
  }

  const SectionReader r(doc, "reconstruction",
                        {"target", "recon_n", "recon_degree", "step_size", "riesz",
                         "max_iterations", "cg_restart", "gradient_floor", "initial_constant",
                         "clamp"});
  ReconstructionConfig& rc = c.reconstruction;
  try {
    rc.target = parse_target(r.text("target", to_string(rc.target)));
  } catch (const ConfigError& e) {
    r.fail("target", e.what());
  }
  rc.recon_n = r.integer("recon_n", rc.recon_n);
  rc.recon_degree = r.integer("recon_degree", rc.recon_degree);
  rc.step_size = r.optional_number("step_size");
  rc.riesz = r.boolean("riesz", rc.riesz);
  rc.max_iterations = r.integer("max_iterations", rc.max_iterations);
  rc.cg_restart = r.integer("cg_restart", rc.cg_restart);
  rc.gradient_floor = r.number("gradient_floor", rc.gradient_floor);
  rc.initial_constant = r.optional_number("initial_constant");
  rc.clamp = r.boolean("clamp", rc.clamp);
  try {
    rc.validate();
  } catch (const ConfigError& e) {
    r.fail(e.field(), e.what());
  }

  const SectionReader pa(doc, "parabolic", {"dt", "T", "theta", "u0"});
  c.parabolic.dt = pa.number("dt", c.parabolic.dt);
  c.parabolic.T = pa.number("T", c.parabolic.T);
  c.parabolic.theta = pa.number("theta", c.parabolic.theta);
  const std::string u0 = pa.text("u0", c.parabolic.u0_steady_state ? "steady" : "zero");
  if (u0 != "steady" && u0 != "zero") pa.fail("u0", "u0: expected steady or zero, got '" + u0 + "'");
  c.parabolic.u0_steady_state = u0 == "steady";
  try {
    c.parabolic.validate();
  } catch (const ConfigError& e) {
    pa.fail(e.field(), e.what());
  }

  const SectionReader pc(doc, "positivity", {"condition", "c", "beta", "grid_n"});
  const std::string cond = pc.text("condition", "pc1");
  if (cond == "pc1") c.pc_condition = PositivityCondition::PC1;
  else if (cond == "pc2") c.pc_condition = PositivityCondition::PC2;
  else pc.fail("condition", "condition: expected pc1 or pc2, got '" + cond + "'");
  c.pc_c = pc.number("c", c.pc_c);
  c.pc_beta = pc.number("beta", c.pc_beta);
  c.pc_grid_n = pc.integer("grid_n", c.pc_grid_n);
  if (c.pc_c < 0) pc.fail("c", "c: must be non-negative");
  if (c.pc_beta < 0) pc.fail("beta", "beta: must be non-negative");
  if (c.pc_grid_n < 1) pc.fail("grid_n", "grid_n: must be positive");

  const SectionReader o(doc, "ode", {"c1", "c2", "M", "beta", "theta0", "z_end", "dz"});
  c.ode.c1 = o.number("c1", c.ode.c1);
  c.ode.c2 = o.number("c2", c.ode.c2);
  c.ode.M = o.number("M", c.ode.M);
  c.ode.beta = o.number("beta", c.ode.beta);
  c.ode_theta0 = o.number("theta0", c.ode_theta0);
  c.ode_z_end = o.number("z_end", c.ode_z_end);
  c.ode_dz = o.number("dz", c.ode_dz);
  try {
    c.ode.validate();
  } catch (const ConfigError& e) {
    o.fail(e.field(), e.what());
  }
  if (c.ode_theta0 < 0) o.fail("theta0", "theta0: must be non-negative");
  if (!(c.ode_z_end > 0)) o.fail("z_end", "z_end: must be positive");
  if (!(c.ode_dz > 0)) o.fail("dz", "dz: must be positive");

  const SectionReader s(doc, "sweep", {"mu", "delta", "seeds", "targets", "noise_mu_q", "noise_mu_f"});
  c.mu_values = s.numbers("mu", c.mu_values);
  for (double mu : c.mu_values)
    if (!(mu > 0)) s.fail("mu", "mu: sweep values must be positive");
  c.delta_values = s.numbers("delta", c.delta_values);
  for (double d : c.delta_values)
    if (!(d >= 0 && d < 1)) s.fail("delta", "delta: values must lie in [0, 1)");
  c.seeds = s.unsigned_list("seeds", c.seeds);
  if (const auto t = s.raw("targets")) {
    c.targets.clear();
    for (const auto& item : split_list(*t)) {
      try {
        c.targets.push_back(parse_target(item));
      } catch (const ConfigError& e) {
        s.fail("targets", e.what());
      }
    }
    if (c.targets.empty()) s.fail("targets", "targets: empty list");
  }
  const bool ex2 = c.problem == "example2";
  c.noise_mu_q = s.number("noise_mu_q", ex2 ? 500.0 : 1000.0);
  c.noise_mu_f = s.number("noise_mu_f", ex2 ? 1000.0 : 1200.0);
  if (!(c.noise_mu_q > 0)) s.fail("noise_mu_q", "noise_mu_q: must be positive");
  if (!(c.noise_mu_f > 0)) s.fail("noise_mu_f", "noise_mu_f: must be positive");

  const SectionReader out(doc, "output", {"dir"});
  c.output_dir = out.text("dir", c.output_dir);
  if (c.output_dir.empty()) out.fail("dir", "dir: must not be empty");
  return c;
}

ConfigDocument RunConfig::to_document() const {
  ConfigDocument d;
  d.set("problem", "name", problem);
  if (problem == "custom") {
    d.set("problem", "q", q_expr);
    d.set("problem", "b1", b1_expr);
    d.set("problem", "b2", b2_expr);
    d.set("problem", "c", c_expr);
    d.set("problem", "f", f_expr);
  }
  if (rough_b1 && rough_b2 && rough_c) {
    d.set("problem", "rough_b1", format_double(*rough_b1));
    d.set("problem", "rough_b2", format_double(*rough_b2));
    d.set("problem", "rough_c", format_double(*rough_c));
  }
  d.set("problem", "use_rough", use_rough ? "true" : "false");
  d.set("problem", "truth_n", std::to_string(truth_n));
  d.set("problem", "truth_degree", std::to_string(truth_degree));

  const AssimilationConfig& a = assimilation;
  d.set("assimilation", "mu", format_double(a.mu));
  d.set("assimilation", "feedback_mode", to_string(a.feedback_mode));
  d.set("assimilation", "misfit", to_string(a.misfit_mode));
  d.set("assimilation", "solver_n", std::to_string(a.solver_n));
  d.set("assimilation", "solver_degree", std::to_string(a.solver_degree));
  d.set("assimilation", "coarse_n", std::to_string(a.obs.coarse_n));
  d.set("assimilation", "delta", format_double(a.obs.delta));
  d.set("assimilation", "seed", std::to_string(a.obs.seed));
  d.set("assimilation", "solve_tolerance", format_double(a.solve_tolerance));

  const ReconstructionConfig& r = reconstruction;
  d.set("reconstruction", "target", to_string(r.target));
  d.set("reconstruction", "recon_n", std::to_string(r.recon_n));
  d.set("reconstruction", "recon_degree", std::to_string(r.recon_degree));
  d.set("reconstruction", "step_size", r.step_size ? format_double(*r.step_size) : "auto");
  d.set("reconstruction", "riesz", r.riesz ? "true" : "false");
  d.set("reconstruction", "max_iterations", std::to_string(r.max_iterations));
  d.set("reconstruction", "cg_restart", std::to_string(r.cg_restart));
  d.set("reconstruction", "gradient_floor", format_double(r.gradient_floor));
  d.set("reconstruction", "initial_constant",
        r.initial_constant ? format_double(*r.initial_constant) : "auto");
  d.set("reconstruction", "clamp", r.clamp ? "true" : "false");

  d.set("parabolic", "dt", format_double(parabolic.dt));
  d.set("parabolic", "T", format_double(parabolic.T));
  d.set("parabolic", "theta", format_double(parabolic.theta));
  d.set("parabolic", "u0", parabolic.u0_steady_state ? "steady" : "zero");

  d.set("positivity", "condition", pc_condition == PositivityCondition::PC1 ? "pc1" : "pc2");
  d.set("positivity", "c", format_double(pc_c));
  d.set("positivity", "beta", format_double(pc_beta));
  d.set("positivity", "grid_n", std::to_string(pc_grid_n));

  d.set("ode", "c1", format_double(ode.c1));
  d.set("ode", "c2", format_double(ode.c2));
  d.set("ode", "M", format_double(ode.M));
  d.set("ode", "beta", format_double(ode.beta));
  d.set("ode", "theta0", format_double(ode_theta0));
  d.set("ode", "z_end", format_double(ode_z_end));
  d.set("ode", "dz", format_double(ode_dz));

  auto list = [](const auto& xs, auto fmt) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ", ") + fmt(x);
    return out;
  };
  d.set("sweep", "mu", list(mu_values, format_double));
  d.set("sweep", "delta", list(delta_values, format_double));
  d.set("sweep", "seeds", list(seeds, [](std::uint64_t s) { return std::to_string(s); }));
  d.set("sweep", "targets", list(targets, [](Target t) { return to_string(t); }));
  d.set("sweep", "noise_mu_q", format_double(noise_mu_q));
  d.set("sweep", "noise_mu_f", format_double(noise_mu_f));

  d.set("output", "dir", output_dir);
  return d;
}

ProblemSpec RunConfig::truth_spec() const {
  if (problem == "custom") return problem_from_expressions(q_expr, b1_expr, b2_expr, c_expr, f_expr);
  return problem_by_name(problem);
}

ProblemSpec RunConfig::model_spec() const {
  ProblemSpec s = truth_spec();
  if (use_rough) {
    s.b1 = CoefficientField::constant(*rough_b1);
    s.b2 = CoefficientField::constant(*rough_b2);
    s.c = CoefficientField::constant(*rough_c);
  }
  return s;
}

}  // namespace cda
