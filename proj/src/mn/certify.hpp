#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mn/newton.hpp"
#include "mn/registry.hpp"
#include "mn/scalar_majorant.hpp"

namespace mn {

struct CheckViolation {
  std::string check;
  double where = 0.0;  // iterate index, probe index, or sample radius
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of one family of inequality comparisons.  worst_margin is the
/// smallest rhs - lhs seen (negative means a violation before slack);
/// max_abs_gap is the largest |rhs - lhs| and measures tightness on
/// equality-case pairs.
struct CheckResult {
  bool ok = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  double max_abs_gap = 0.0;
  std::vector<CheckViolation> violations;

  void compare(const std::string& check, double where, double lhs, double rhs,
               double slack);
};

struct HypothesisMargin : CheckResult {
  int samples = 0;
  int tau_samples = 0;
};

struct RateReport {
  double superlinear_tail = std::numeric_limits<double>::quiet_NaN();
  bool tail_applicable = false;  // at least 5 iterates above the threshold
  // Vanishing-ratio claims become a finite-tail criterion: the final ratio
  // must sit below 0.1 and the last three ratios must decrease.
  bool tail_ok = true;
  std::optional<bool> order_bound_ok{};     // error_{k+1} <= ratio_k * error_k^{p+1}
  std::optional<bool> order_monotone_ok{};  // scalar order ratios strictly decrease
  double order_tail = std::numeric_limits<double>::quiet_NaN();
  std::size_t pre_threshold = 0;
  std::vector<CheckViolation> violations;
  bool ok() const {
    return (!tail_applicable || tail_ok) && order_bound_ok.value_or(true) &&
           order_monotone_ok.value_or(true);
  }
};

struct CertifyOptions {
  int hypothesis_samples = 200;  // sampled points x in the ball
  int tau_samples = 21;          // grid on [0, 1]
  int uniqueness_probes = 0;     // 0 disables the uniqueness check
  std::uint64_t seed = 20240501;
  double slack_scale = 1e-10;    // additive slack: slack_scale * (1 + |rhs|)
  double scalar_atol = 1e-14;
};

/// Sampled verification that the operator derivative variation is bounded by
/// the scalar derivative difference:
///   ||J*^{-1}[J(x) - J(x* + tau (x - x*))]|| <= f'(||x-x*||) - f'(tau ||x-x*||).
HypothesisMargin check_majorant_hypothesis(const Problem& problem,
                                           const MajorantModel& model,
                                           int samples = 200, int tau_samples = 21,
                                           std::uint64_t seed = 20240501,
                                           double slack_scale = 1e-10);

/// Per-iterate check  ||J(x_k)^{-1} J(x*)|| <= 1/|f'(||x_k - x*||)|.
CheckResult check_invertibility_bound(const Problem& problem, const MajorantModel& model,
                                      const NewtonTrace& trace,
                                      double slack_scale = 1e-10);

/// Per-iterate check of the linearization error against the scalar one:
///   ||J*^{-1} (F(x*) - F(x_k) - J(x_k)(x* - x_k))|| <= t f'(t) - f(t),  t = ||x_k - x*||.
CheckResult check_linearization_bound(const Problem& problem, const MajorantModel& model,
                                      const NewtonTrace& trace,
                                      double slack_scale = 1e-10);

/// error_k <= t_k on the common prefix of the two traces.
CheckResult check_envelope(const NewtonTrace& trace, const ScalarTrace& scalar,
                           double slack_scale = 1e-10);

/// error_{k+1} <= |n_f(error_k)| per iterate.
CheckResult check_contraction(const NewtonTrace& trace, const MajorantModel& model,
                              double slack_scale = 1e-10);

/// Superlinear tail plus, when the model declares an exponent, the
/// order-(p+1) bound and the monotone decrease of the scalar order ratios.
/// Limits become finite-tail statements: the last error ratio must drop below
/// 0.1 once at least 5 iterates precede the convergence threshold.
RateReport check_rates(const NewtonTrace& trace, const ScalarTrace& scalar,
                       std::optional<double> p, double slack_scale = 1e-10,
                       double threshold = 1e-14);

/// Seeded Newton probes inside the sigma ball: every run that converges while
/// staying in the ball must land on the declared root; random points keep a
/// residual above the floor 1e-12.
CheckResult check_uniqueness(const Problem& problem, double sigma, int probes,
                             std::uint64_t seed = 20240501);

struct CertificationReport {
  HypothesisReport model_hypotheses;
  RadiiReport radii;
  HypothesisMargin hypothesis;
  CheckResult invertibility;
  CheckResult taylor;
  CheckResult contraction;
  CheckResult envelope;
  RateReport rates;
  std::optional<CheckResult> uniqueness{};

  bool passed() const;
  std::vector<CheckViolation> all_violations() const;
};

/// Runs every check above against a completed trace.  The starting distance
/// must lie inside the certified radius r = min(kappa, rho).
CertificationReport certify(const Problem& problem, const MajorantModel& model,
                            const NewtonTrace& trace, const CertifyOptions& opt = {});

}  // namespace mn
