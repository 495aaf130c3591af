// dgiso: isoperimetric profile, candidate tables and verification reports for
// the double Gaussian on the line and in the plane.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dgiso/run.hpp"

namespace {

void add_common(CLI::App* cmd, dgiso::RunConfig& cfg, std::string& format) {
  cmd->add_option("--variances", cfg.variances, "variance grid a^2, comma separated")->delimiter(',');
  cmd->add_option("--masses", cfg.masses, "mass grid A in (0, 1/2), comma separated")->delimiter(',');
  cmd->add_option("--grid-points", cfg.oracle.grid_points, "oracle grid size N (odd)");
  cmd->add_option("--kmax", cfg.oracle.max_boundary_points, "oracle maximum boundary points");
  cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.output_path, "output file (default: standard output)");
  cmd->add_option("--workers", cfg.workers, "worker threads");
  cmd->add_option("--tol-mass", cfg.tol.mass, "mass residual tolerance");
  cmd->add_option("--tol-root", cfg.tol.root, "root residual tolerance");
  cmd->add_option("--margin", cfg.tol.margin, "strict-win margin for perimeter comparisons");
  cmd->add_flag("--timing", cfg.timing, "embed wall times in JSON reports");
  cmd->add_option("--seed", cfg.seed, "reserved; all algorithms are deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isoperimetric checks for the double Gaussian density"};
  app.require_subcommand(1);

  dgiso::RunConfig cfg;
  std::string format = "csv";
  double a2 = 0.0, A = 0.0;

  auto* profile = app.add_subcommand("profile", "ray point and perimeter for each grid cell");
  auto* verify = app.add_subcommand("verify", "run every applicable verification report");
  auto* candidates = app.add_subcommand("candidates", "scored stationary candidates at one (a^2, A)");
  auto* oracle = app.add_subcommand("oracle", "brute-force minimum against the ray for each grid cell");
  auto* lines = app.add_subcommand("lines", "vertical against horizontal half-planes for each grid cell");
  for (auto* cmd : {profile, verify, candidates, oracle, lines}) add_common(cmd, cfg, format);
  candidates->add_option("--a2", a2, "variance a^2")->required();
  candidates->add_option("--mass", A, "enclosed mass A")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dgiso::exit_invalid_config;
  }
  cfg.format = format == "json" ? dgiso::Format::json : dgiso::Format::csv;

  try {
    if (*profile) return dgiso::cmd_profile(cfg);
    if (*verify) return dgiso::cmd_verify(cfg);
    if (*candidates) return dgiso::cmd_candidates(cfg, a2, A);
    if (*oracle) return dgiso::cmd_oracle(cfg);
    if (*lines) return dgiso::cmd_lines(cfg);
  } catch (const dgiso::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return dgiso::exit_invalid_config;
  } catch (const dgiso::IoError& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return dgiso::exit_io_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dgiso::exit_verification_failed;
  }
  return dgiso::exit_invalid_config;
}
