#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cda/config.hpp"

namespace cda {

inline constexpr const char* kVersion = "0.1.0";

/// Command names accepted by run_command, in CLI order.
const std::vector<std::string>& command_names();

struct CommandOptions {
  /// Overrides [output] dir.
  std::optional<std::filesystem::path> out_dir;
  /// Overrides [assimilation] seed; sweep-noise uses seed, seed+1, ... instead
  /// of the configured seed list (same count).
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  /// Compare results against expected ranges or documented properties.
  bool check = false;
  /// Directory of "<problem>_sweep_mu.csv" range files. Unset: $CDA_EXPECTED_DIR,
  /// then the configs/expected directory of the source tree.
  std::optional<std::filesystem::path> expected_dir;
  /// Progress and advisory warnings; null silences them.
  std::ostream* log = nullptr;
};

struct CommandOutcome {
  std::filesystem::path out_dir;
  std::vector<std::string> files;        // relative to out_dir, manifest last
  std::vector<std::string> check_failures;
  bool check_passed() const { return check_failures.empty(); }
};

/// Runs a command and writes its outputs plus "manifest.txt" into the output
/// directory. The manifest is written even when the command throws; the
/// exception is rethrown afterwards. Applies the option overrides to `cfg`
/// before anything runs, so the manifest records the effective config.
CommandOutcome run_command(const std::string& command, RunConfig cfg, const CommandOptions& opt);

/// One (variant, μ) cell of a μ-sweep. E is NaN when the run failed.
struct SweepMuRow {
  Target target = Target::Conductivity;
  bool rough = false;
  double mu = 0.0;
  double E = 0.0;
  double E_ref = 0.0;
  std::string stop_reason;  // or "failed"
  int iterations = 0;
  std::string error;
  std::string label() const;  // "E_q(exact)", "E_f(rough)", ...
};

/// Reconstructions for every configured target × {exact, rough} × μ, in that
/// declared order whatever `jobs` is. Rough variants are skipped when the
/// config has no rough coefficients.
std::vector<SweepMuRow> sweep_mu(const RunConfig& cfg, int jobs, std::ostream* log = nullptr);

struct NoiseRow {
  Target target = Target::Conductivity;
  double mu = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double E = 0.0;
  std::string stop_reason;
  int iterations = 0;
  std::string error;
};

struct NoiseMean {
  Target target = Target::Conductivity;
  double mu = 0.0;
  double delta = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int count = 0;  // successful runs
};

/// Reconstructions for every target × delta × seed at the per-target noise μ.
/// delta = 0 data do not depend on the seed, so that run is done once and
/// shared by every seed.
std::vector<NoiseRow> sweep_noise(const RunConfig& cfg, int jobs, std::ostream* log = nullptr);
std::vector<NoiseMean> noise_means(const std::vector<NoiseRow>& rows);

/// Spearman rank correlation with average ranks for ties; NaN if either
/// sample is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Expected-range cell "row,mu,reference,lo,hi,checked".
struct ExpectedRange {
  std::string row;
  double mu = 0.0;
  double reference = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool checked = true;
};
std::vector<ExpectedRange> read_expected_ranges(const std::filesystem::path& path);
/// One message per checked cell that is missing, failed or out of range.
std::vector<std::string> check_sweep_mu(const std::vector<SweepMuRow>& rows,
                                        const std::vector<ExpectedRange>& expected);

}  // namespace cda
