// Command-line front end: run, run-rescaled, verify, oracle-compare,
// geometry-check.

#include "imcf/cli_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> values;  // key -> value from the command line

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    for (const auto& key : imcf::config_keys()) {
      cmd->add_option("--" + dashed(key.name), values[key.name],
                      key.help + " (default " + key.default_value + ")");
    }
  }

  imcf::FlowConfig resolve(CLI::App* cmd) const {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& key : imcf::config_keys()) {
      if (cmd->count("--" + dashed(key.name)) > 0) overrides.emplace_back(key.name, values.at(key.name));
    }
    return imcf::parse_config(config_path, overrides);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse mean curvature flow of spacelike graphs in hyperbolic space"};
  app.require_subcommand(1);

  ConfigOptions run_opts, rescaled_opts, verify_opts, oracle_opts;
  std::string trajectory;

  auto* run = app.add_subcommand("run", "evolve the raw flow and write trajectory, snapshots and report");
  run_opts.attach(run);
  auto* run_rescaled = app.add_subcommand("run-rescaled", "evolve the rescaled flow and check convergence");
  rescaled_opts.attach(run_rescaled);
  auto* verify = app.add_subcommand("verify", "run the full monitor suite, or check an existing trajectory");
  verify_opts.attach(verify);
  verify->add_option("--trajectory", trajectory, "trajectory.csv to check instead of a fresh run");
  auto* oracle = app.add_subcommand("oracle-compare", "compare constant data against the round solution");
  oracle_opts.attach(oracle);
  auto* geometry = app.add_subcommand("geometry-check", "run the embedding-consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(imcf::ExitCode::ConfigError);
  }

  try {
    if (*run) return imcf::cmd_run(run_opts.resolve(run), std::cout);
    if (*run_rescaled) {
      auto cfg = rescaled_opts.resolve(run_rescaled);
      cfg.flow = imcf::FlowMode::Rescaled;
      return imcf::cmd_run(cfg, std::cout);
    }
    if (*verify) {
      const auto cfg = verify_opts.resolve(verify);
      std::optional<std::string> traj;
      if (verify->count("--trajectory") > 0) traj = trajectory;
      return imcf::cmd_verify(cfg, traj, std::cout);
    }
    if (*oracle) return imcf::cmd_oracle_compare(oracle_opts.resolve(oracle), std::cout);
    if (*geometry) return imcf::cmd_geometry_check(std::cout);
  } catch (const imcf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(imcf::ExitCode::ConfigError);
  } catch (const imcf::SingularityError& e) {
    std::cerr << "singularity guard: " << e.what() << "\n";
    return static_cast<int>(imcf::ExitCode::SingularityGuard);
  } catch (const imcf::MonitorFailure& e) {
    std::cerr << "monitor failure: " << e.what() << "\n";
    return static_cast<int>(imcf::ExitCode::MonitorFailure);
  }
  return 0;
}
