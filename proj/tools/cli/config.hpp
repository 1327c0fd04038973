#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cli {

struct Tolerances {
  double step_atol = 1e-14;
  double residual_atol = 1e-14;
  int max_iters = 100;
};

struct MajorantSpec {
  std::string family;  // holder | lipschitz | generalized | example
  // holder / example / generalized exponent
  std::optional<double> K{};
  std::optional<double> p{};
  // lipschitz
  std::optional<double> lipschitz_constant{};
  std::optional<double> inverse_norm{};
  // generalized
  std::string density_file;    // with density_format piecewise|table
  std::string density_format;
  std::vector<std::array<double, 6>> segments;  // inline: lo hi c0 c1 c2 c3
  // example
  std::string example_name;
};

struct RadialSweep {
  int count = 0;
  double min_frac = 0.0;
  double max_frac = 0.0;
};

struct Outputs {
  std::string csv_path;
  std::string report_path;
  std::string plot_path;
};

struct ExperimentConfig {
  std::string problem;  // registry id or "worst_case"
  MajorantSpec majorant;
  std::optional<double> kappa{};
  std::vector<std::vector<double>> starts;  // explicit x0 vector(s)
  std::optional<RadialSweep> sweep{};
  Tolerances tolerances;
  Outputs outputs;
  std::uint64_t seed = 20240501;
  bool allow_outside = false;
  int uniqueness_probes = 32;
};

/// Throws ConfigError on any malformed or inconsistent field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

}  // namespace cli
