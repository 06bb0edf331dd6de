// cda-recon: command-line driver for forward solves, reconstructions and sweeps.

#include <CLI11.hpp>

#include <iostream>

#include "cda/commands.hpp"
#include "cda/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kSolver = 3, kCheck = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coefficient reconstruction by continuous data assimilation"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool check = false;
  std::string expected_dir;
  bool quiet = false;

  for (const auto& name : cda::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Config file")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    sub->add_option("--seed", seed, "Noise seed (overrides the configured seeds)");
    sub->add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_flag("--check", check, "Exit 4 unless results meet the expected ranges");
    sub->add_option("--expected", expected_dir, "Directory of expected-range CSV files");
    sub->add_flag("-q,--quiet", quiet, "No progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();
  cda::CommandOptions opt;
  if (!out_dir.empty()) opt.out_dir = out_dir;
  if (sub->count("--seed")) opt.seed = seed;
  if (!expected_dir.empty()) opt.expected_dir = expected_dir;
  opt.jobs = jobs;
  opt.check = check;
  opt.log = quiet ? nullptr : &std::cerr;

  try {
    const auto cfg = cda::RunConfig::from_document(cda::ConfigDocument::parse_file(config_path));
    const auto outcome = cda::run_command(command, cfg, opt);
    for (const auto& f : outcome.files) std::cout << (outcome.out_dir / f).string() << '\n';
    if (!outcome.check_passed()) {
      for (const auto& msg : outcome.check_failures) std::cerr << "check failed: " << msg << '\n';
      return kCheck;
    }
    if (check) std::cerr << "check passed\n";
    return kOk;
  } catch (const cda::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cda::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const cda::EvaluationError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
