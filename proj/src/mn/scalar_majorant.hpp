#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mn/rootfind.hpp"

namespace mn {

using ScalarFn = std::function<double(double)>;

/// Scalar model (f, f') on [0, domain_bound).  The calculus below assumes
///   h1: f(0) = 0 and f'(0) = -1,
///   h2: f' strictly increasing,
/// and, when rate_exponent = p is set,
///   h3: t -> [f(t)/f'(t) - t] / t^{p+1} strictly increasing on (0, nu).
/// Hypotheses are only ever checked by sampling; see verify_hypotheses().
struct MajorantModel {
  ScalarFn f;
  ScalarFn fprime;
  double domain_bound = std::numeric_limits<double>::infinity();
  std::optional<double> rate_exponent{};  // p in [0, 1]
  std::string name = "custom";
};

struct HypothesisReport {
  bool h1_ok = false;
  bool h2_ok = false;
  std::optional<bool> h3_ok{};  // present iff the model declares an exponent
  double f_at_zero = 0.0;
  double fprime_at_zero = 0.0;
  bool ok() const { return h1_ok && h2_ok && h3_ok.value_or(true); }
};

/// Sampled verification of h1-h3.  Strict monotonicity is required: a sampled
/// tie counts as a violation.
HypothesisReport verify_hypotheses(const MajorantModel& model, int samples = 512);

/// Certified constants of the scalar calculus.
///   nu    largest radius with f' < 0
///   rho   largest radius with |n_f(t)| < t on (0, rho)
///   sigma largest radius in (0, kappa) with f < 0  (uniqueness ball)
///   r     min(kappa, rho)                          (convergence radius)
struct RadiiReport {
  double kappa = 0.0;
  double nu = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double r = 0.0;
  bool rho_is_optimal = false;    // the contraction bound is attained and rho < kappa
  bool domain_truncated = false;  // unbounded domain scan stopped at the cap
  bool contraction_resumes = false;  // |n_f|/t dips below 1 again past rho
  RootFindOptions tolerances{};
};

/// Newton iteration map n_f(t) = t - f(t)/f'(t).  Nonpositive on [0, nu) for
/// models satisfying h1/h2.  Throws when f'(t) >= 0 (t beyond nu) or t < 0.
double newton_scalar_map(const MajorantModel& model, double t);

double compute_nu(const MajorantModel& model, const RootFindOptions& opt = {});
double compute_rho(const MajorantModel& model, double nu, const RootFindOptions& opt = {});
double compute_sigma(const MajorantModel& model, double kappa, const RootFindOptions& opt = {});
RadiiReport compute_radii(const MajorantModel& model, double kappa, const RootFindOptions& opt = {});

/// History of t_{k+1} = |n_f(t_k)|.
struct ScalarTrace {
  std::vector<double> t;
  std::vector<double> ratio_linear;  // t[k+1]/t[k]
  std::vector<double> ratio_order;   // t[k+1]/t[k]^{p+1}; empty when p unset
  double atol = 1e-14;
  bool converged = false;

  /// Number of leading entries with t[k] >= atol.  Entries past this point sit
  /// at or below the stopping threshold and are excluded from rate
  /// diagnostics (their ratios are dominated by evaluation roundoff).
  std::size_t pre_threshold_count() const;
};

struct ScalarSequenceOptions {
  int max_iters = 100;
  double atol = 1e-14;
};

/// Runs the scalar sequence from t0.  The sequence must stay in (0, radius)
/// and decrease strictly; any violation signals an inconsistent model/radius
/// pair and throws.  When radius_guard is not given, rho is computed from the
/// model and used as the guard (the sequence is contained in (0, rho)).
ScalarTrace scalar_sequence(const MajorantModel& model, double t0,
                            const ScalarSequenceOptions& opt = {},
                            std::optional<double> radius_guard = {});

/// Closed-form bound on t_k given the first two entries: geometric when p = 0,
/// otherwise t0 * (t1/t0)^{[(p+1)^k - 1]/p}.
double a_priori_bound(double t0, double t1, double p, int k);

}  // namespace mn
