#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cda/reconstruct.hpp"

namespace cda {

/// Sectioned key-value text.
///
///   # comment            (also ';')
///   [section]
///   key = value          (value runs to end of line, surrounding blanks trimmed)
///
/// Keys outside any section, duplicate keys and malformed lines are
/// ConfigErrors carrying "origin:line". Order is preserved for serialization.
class ConfigDocument {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  static ConfigDocument parse(std::istream& is, const std::string& origin = "<config>");
  static ConfigDocument parse_string(const std::string& text, const std::string& origin = "<config>");
  static ConfigDocument parse_file(const std::filesystem::path& path);

  bool has_section(const std::string& section) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  /// Replaces an existing value or appends.
  void set(const std::string& section, const std::string& key, const std::string& value);
  const std::vector<std::pair<std::string, Entries>>& sections() const { return sections_; }
  /// "origin:line" of a key, for diagnostics; empty when unknown.
  std::string where(const std::string& section, const std::string& key) const;

  std::string serialize() const;

 private:
  std::vector<std::pair<std::string, Entries>> sections_;
  std::vector<std::pair<std::string, std::string>> locations_;  // "section.key" -> "origin:line"
};

/// Everything a command needs, fully resolved (no implicit defaults left
/// once constructed from a document).
struct RunConfig {
  // [problem]
  std::string problem = "example1";
  /// Inline coefficient expressions, used when problem = "custom".
  std::string q_expr, b1_expr, b2_expr, c_expr, f_expr;
  /// Perturbed b̃ = (rough_b1, rough_b2) and c̃ used by the model in place of
  /// the exact b, c (single reconstructions and the rough sweep variants).
  std::optional<double> rough_b1, rough_b2, rough_c;
  bool use_rough = false;
  int truth_n = 256;
  int truth_degree = 2;

  AssimilationConfig assimilation;    // [assimilation]
  ReconstructionConfig reconstruction;  // [reconstruction]
  ParabolicConfig parabolic;          // [parabolic]

  // [positivity]
  PositivityCondition pc_condition = PositivityCondition::PC1;
  double pc_c = 0.05;
  double pc_beta = 1.0;
  int pc_grid_n = kDefaultPcGrid;

  // [ode]
  OdeBoundProblem ode{1.0, 1.0, 2.0, 1.0};
  double ode_theta0 = 0.0;
  double ode_z_end = 50.0;
  double ode_dz = 1e-3;

  // [sweep]
  std::vector<double> mu_values{1, 10, 100, 200, 500, 1000, 5000, 10000, 50000};
  std::vector<double> delta_values{0.0, 0.02, 0.04, 0.06, 0.08, 0.1};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<Target> targets{Target::Conductivity, Target::Source};
  double noise_mu_q = 1000.0;
  double noise_mu_f = 1200.0;

  // [output]
  std::string output_dir = "out";

  /// Builds and validates; unknown sections or keys and out-of-range values
  /// are ConfigErrors naming the field. Sections "run" and "files" (written
  /// by manifests) are ignored so a manifest can be fed back as a config.
  static RunConfig from_document(const ConfigDocument& doc);
  ConfigDocument to_document() const;

  /// Model spec with the rough b̃, c̃ substituted when use_rough is set.
  ProblemSpec model_spec() const;
  ProblemSpec truth_spec() const;
};

/// Rough constant stand-ins (b̃1, b̃2, c̃) for the named examples.
std::optional<std::array<double, 3>> default_rough_coefficients(const std::string& problem);

std::string format_double(double v);
std::string to_string(FeedbackMode m);
std::string to_string(MisfitMode m);

}  // namespace cda
