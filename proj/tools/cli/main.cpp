#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "capi_util.hpp"
#include "config.hpp"
#include "runners.hpp"

namespace {

// Exit codes: 0 success, 2 certification violation, 3 config/validation
// error, 4 solver non-convergence.
int dispatch(const std::string& verb, const std::string& config_path,
             const cli::GlobalOptions& global) {
  const cli::ExperimentConfig config = cli::load_config(config_path);
  if (verb == "radii") return cli::run_radii(config, global);
  if (verb == "solve") return cli::run_solve(config, global);
  if (verb == "certify") return cli::run_certify(config, global);
  return cli::run_sweep(config, global);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton's method with certified convergence radii and error bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  cli::GlobalOptions global;
  long long seed = -1;

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out-dir", global.out_dir, "directory for relative output paths");
  app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--verbose", global.verbose, "chatty progress on stderr");

  auto* radii = app.add_subcommand("radii", "compute certified radii for a scalar model");
  auto* solve = app.add_subcommand("solve", "run Newton and emit a CSV trace");
  auto* certify = app.add_subcommand("certify", "replay every certified bound against a run");
  auto* sweep = app.add_subcommand("sweep", "radial sweep of starting points");

  CLI11_PARSE(app, argc, argv);

  std::string verb;
  if (radii->parsed()) verb = "radii";
  if (solve->parsed()) verb = "solve";
  if (certify->parsed()) verb = "certify";
  if (sweep->parsed()) verb = "sweep";

  if (seed >= 0) global.seed = static_cast<std::uint64_t>(seed);

  try {
    return dispatch(verb, config_path, global);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const cli::ApiError& e) {
    if (e.code == MN_ERR_INVALID_ARGUMENT || e.code == MN_ERR_UNKNOWN_NAME ||
        e.code == MN_ERR_IO || e.code == MN_ERR_MODEL || e.code == MN_ERR_DOMAIN) {
      std::cerr << "config error: " << e.what() << '\n';
      return 3;
    }
    std::cerr << "solver error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
