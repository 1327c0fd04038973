#include "mn/serialize.hpp"

namespace mn {

using nlohmann::json;

namespace {

json violations_json(const std::vector<CheckViolation>& violations) {
  json arr = json::array();
  for (const auto& v : violations)
    arr.push_back({{"check", v.check}, {"where", v.where}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  return arr;
}

}  // namespace

json to_json(const RadiiReport& report) {
  return {
      {"kappa", report.kappa},
      {"nu", report.nu},
      {"rho", report.rho},
      {"sigma", report.sigma},
      {"r", report.r},
      {"rho_is_optimal", report.rho_is_optimal},
      {"domain_truncated", report.domain_truncated},
      {"contraction_resumes", report.contraction_resumes},
      {"tolerances",
       {{"grid_points", report.tolerances.grid_points},
        {"bisect_atol", report.tolerances.bisect_atol},
        {"max_bisect_steps", report.tolerances.max_bisect_steps},
        {"domain_cap", report.tolerances.domain_cap}}},
  };
}

json to_json(const HypothesisReport& report) {
  json out = {
      {"h1_ok", report.h1_ok},
      {"h2_ok", report.h2_ok},
      {"f_at_zero", report.f_at_zero},
      {"fprime_at_zero", report.fprime_at_zero},
  };
  if (report.h3_ok) out["h3_ok"] = *report.h3_ok;
  return out;
}

json to_json(const CheckResult& result) {
  return {
      {"ok", result.ok},
      {"worst_margin", result.worst_margin},
      {"max_abs_gap", result.max_abs_gap},
      {"violations", violations_json(result.violations)},
  };
}

json to_json(const RateReport& report) {
  json out = {
      {"superlinear_tail", report.superlinear_tail},
      {"tail_applicable", report.tail_applicable},
      {"tail_ok", report.tail_ok},
      {"pre_threshold_iterations", report.pre_threshold},
      {"violations", violations_json(report.violations)},
  };
  if (report.order_bound_ok) out["order_bound_ok"] = *report.order_bound_ok;
  if (report.order_monotone_ok) out["order_monotone_ok"] = *report.order_monotone_ok;
  if (std::isfinite(report.order_tail)) out["order_tail"] = report.order_tail;
  return out;
}

json to_json(const CertificationReport& report) {
  json out = {
      {"passed", report.passed()},
      {"model_hypotheses", to_json(report.model_hypotheses)},
      {"radii", to_json(report.radii)},
      {"hypothesis", to_json(report.hypothesis)},
      {"invertibility", to_json(report.invertibility)},
      {"taylor", to_json(report.taylor)},
      {"contraction", to_json(report.contraction)},
      {"envelope", to_json(report.envelope)},
      {"rates", to_json(report.rates)},
      {"violations", violations_json(report.all_violations())},
  };
  out["hypothesis"]["samples"] = report.hypothesis.samples;
  out["hypothesis"]["tau_samples"] = report.hypothesis.tau_samples;
  // Sampling cannot prove the bound for every point of the ball.
  out["hypothesis"]["semantics"] =
      report.hypothesis.ok ? "no sampled violation" : "sampled violation found";
  if (report.uniqueness) out["uniqueness"] = to_json(*report.uniqueness);
  return out;
}

}  // namespace mn
