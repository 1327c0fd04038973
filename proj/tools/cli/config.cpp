#include "config.hpp"

#include <fstream>

#include "capi_util.hpp"

namespace cli {

using nlohmann::json;

namespace {

double require_positive(const json& node, const std::string& key) {
  if (!node.contains(key) || !node[key].is_number())
    throw ConfigError("majorant: missing numeric field '" + key + "'");
  const double value = node[key].get<double>();
  if (!(value > 0.0)) throw ConfigError("majorant: field '" + key + "' must be positive");
  return value;
}

MajorantSpec parse_majorant(const json& node) {
  if (!node.is_object() || !node.contains("family"))
    throw ConfigError("config: majorant must be an object with a 'family' field");
  MajorantSpec spec;
  spec.family = node["family"].get<std::string>();
  const json params = node.value("params", json::object());

  if (spec.family == "holder") {
    spec.K = require_positive(params, "K");
    spec.p = require_positive(params, "p");
  } else if (spec.family == "lipschitz") {
    spec.lipschitz_constant = require_positive(params, "L");
    spec.inverse_norm = require_positive(params, "inverse_norm");
  } else if (spec.family == "generalized") {
    if (params.contains("file")) {
      spec.density_file = params["file"].get<std::string>();
      spec.density_format = params.value("format", "piecewise");
      if (spec.density_format != "piecewise" && spec.density_format != "table")
        throw ConfigError("majorant: density format must be 'piecewise' or 'table'");
    } else if (params.contains("segments")) {
      for (const auto& seg : params["segments"]) {
        if (!seg.is_array() || seg.size() != 6)
          throw ConfigError("majorant: each segment needs [lo, hi, c0, c1, c2, c3]");
        std::array<double, 6> row{};
        for (std::size_t i = 0; i < 6; ++i) row[i] = seg[i].get<double>();
        spec.segments.push_back(row);
      }
      if (spec.segments.empty()) throw ConfigError("majorant: empty segment list");
    } else {
      throw ConfigError("majorant: generalized family needs 'file' or 'segments'");
    }
    if (params.contains("p")) spec.p = params["p"].get<double>();
  } else if (spec.family == "example") {
    if (!params.contains("name"))
      throw ConfigError("majorant: example family needs a 'name'");
    spec.example_name = params["name"].get<std::string>();
    if (params.contains("p")) spec.p = params["p"].get<double>();
  } else {
    throw ConfigError("majorant: unknown family '" + spec.family + "'");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig config;

  if (!doc.contains("problem") || !doc["problem"].is_string())
    throw ConfigError("config: missing 'problem' id");
  config.problem = doc["problem"].get<std::string>();

  if (!doc.contains("majorant")) throw ConfigError("config: missing 'majorant'");
  config.majorant = parse_majorant(doc["majorant"]);

  if (doc.contains("kappa")) {
    const double kappa = doc["kappa"].get<double>();
    if (!(kappa > 0.0)) throw ConfigError("config: kappa must be positive");
    config.kappa = kappa;
  }

  if (doc.contains("x0")) {
    const json& x0 = doc["x0"];
    if (x0.is_number()) {
      config.starts.push_back({x0.get<double>()});
    } else if (x0.is_array() && !x0.empty() && x0[0].is_number()) {
      config.starts.push_back(x0.get<std::vector<double>>());
    } else if (x0.is_array()) {
      for (const auto& row : x0) config.starts.push_back(row.get<std::vector<double>>());
      if (config.starts.empty()) throw ConfigError("config: empty x0 list");
    } else if (x0.is_object()) {
      RadialSweep sweep;
      sweep.count = x0.value("count", 0);
      sweep.min_frac = x0.value("min_frac", 0.0);
      sweep.max_frac = x0.value("max_frac", 0.0);
      if (sweep.count < 1) throw ConfigError("config: sweep count must be >= 1");
      if (!(sweep.min_frac > 0.0) || !(sweep.max_frac >= sweep.min_frac))
        throw ConfigError("config: sweep fractions must satisfy 0 < min_frac <= max_frac");
      config.sweep = sweep;
    } else {
      throw ConfigError("config: x0 must be a vector, a list of vectors, or a radial sweep");
    }
  }
  if (!config.starts.empty() && config.sweep)
    throw ConfigError("config: give either explicit x0 or a radial sweep, not both");

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    config.tolerances.step_atol = tol.value("step_atol", config.tolerances.step_atol);
    config.tolerances.residual_atol =
        tol.value("residual_atol", config.tolerances.residual_atol);
    config.tolerances.max_iters = tol.value("max_iters", config.tolerances.max_iters);
    if (!(config.tolerances.step_atol > 0.0) || !(config.tolerances.residual_atol > 0.0))
      throw ConfigError("config: tolerances must be positive");
    if (config.tolerances.max_iters < 1)
      throw ConfigError("config: max_iters must be >= 1");
  }

  if (doc.contains("outputs")) {
    const json& outputs = doc["outputs"];
    config.outputs.csv_path = outputs.value("csv_path", "");
    config.outputs.report_path = outputs.value("report_path", "");
    config.outputs.plot_path = outputs.value("plot_path", "");
  }

  config.seed = doc.value("seed", config.seed);
  config.allow_outside = doc.value("allow_outside", false);
  config.uniqueness_probes = doc.value("uniqueness_probes", config.uniqueness_probes);
  if (config.uniqueness_probes < 0)
    throw ConfigError("config: uniqueness_probes must be >= 0");

  if (config.sweep && !config.allow_outside && config.sweep->max_frac > 1.0)
    throw ConfigError(
        "config: sweep fractions above 1 require 'allow_outside': true");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace cli
