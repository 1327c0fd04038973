#pragma once

#include <string>

#include "config.hpp"

namespace cli {

struct GlobalOptions {
  std::string out_dir;
  std::optional<std::uint64_t> seed{};
  bool verbose = false;
};

/// Exit codes: 0 success, 2 certification violation, 4 solver
/// non-convergence.  Config/validation problems throw ConfigError (3).
int run_radii(const ExperimentConfig& config, const GlobalOptions& global);
int run_solve(const ExperimentConfig& config, const GlobalOptions& global);
int run_certify(const ExperimentConfig& config, const GlobalOptions& global);
int run_sweep(const ExperimentConfig& config, const GlobalOptions& global);

}  // namespace cli
