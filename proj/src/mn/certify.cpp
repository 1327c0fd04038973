#include "mn/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mn/error.hpp"

namespace mn {

namespace {

Vector random_unit_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector dir(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) dir(i) = gauss(rng);
    norm = dir.norm();
  } while (norm < 1e-12);
  return dir / norm;
}

Vector random_point_in_ball(const Vector& center, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int dim = static_cast<int>(center.size());
  const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
  return center + r * random_unit_direction(dim, rng);
}

double error_at(const NewtonTrace& trace, std::size_t k) {
  return trace.error_norms[k];
}

}  // namespace

void CheckResult::compare(const std::string& check, double where, double lhs,
                          double rhs, double slack) {
  const double margin = rhs - lhs;
  worst_margin = std::min(worst_margin, margin);
  max_abs_gap = std::max(max_abs_gap, std::abs(margin));
  if (!(lhs <= rhs + slack) || !std::isfinite(lhs) || !std::isfinite(rhs)) {
    ok = false;
    violations.push_back({check, where, lhs, rhs});
  }
}

HypothesisMargin check_majorant_hypothesis(const Problem& problem,
                                           const MajorantModel& model, int samples,
                                           int tau_samples, std::uint64_t seed,
                                           double slack_scale) {
  if (!problem.root) fail(ErrorCode::invalid_argument, "hypothesis check needs a known root");
  if (samples < 1 || tau_samples < 2)
    fail(ErrorCode::invalid_argument, "hypothesis check: too few samples");
  const Vector& root = *problem.root;
  const Matrix jac_root_inv = inverse_checked(problem.jacobian(root));

  HypothesisMargin result;
  result.samples = samples;
  result.tau_samples = tau_samples;

  const double hi = std::min(problem.kappa, model.domain_bound) * (1.0 - 1e-9);
  const double lo = hi * 1e-6;
  const double span = std::log(hi / lo);
  std::mt19937_64 rng(seed);

  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 1.0
                                  : static_cast<double>(i) /
                                        static_cast<double>(samples - 1);
    const double radius = lo * std::exp(span * s);
    Vector dir;
    if (problem.dim == 1) {
      dir = Vector::Constant(1, i % 2 == 0 ? 1.0 : -1.0);
    } else {
      dir = random_unit_direction(problem.dim, rng);
    }
    const Vector x = root + radius * dir;
    const Matrix jac_x = problem.jacobian(x);
    for (int j = 0; j < tau_samples; ++j) {
      const double tau =
          static_cast<double>(j) / static_cast<double>(tau_samples - 1);
      const Vector x_tau = root + tau * (x - root);
      const double lhs = operator_norm(jac_root_inv * (jac_x - problem.jacobian(x_tau)));
      const double rhs = model.fprime(radius) - model.fprime(tau * radius);
      result.compare("hypothesis", radius, lhs, rhs, slack_scale * (1.0 + std::abs(rhs)));
    }
  }
  return result;
}

CheckResult check_invertibility_bound(const Problem& problem, const MajorantModel& model,
                                      const NewtonTrace& trace, double slack_scale) {
  if (!problem.root) fail(ErrorCode::invalid_argument, "invertibility check needs a known root");
  CheckResult result;
  const Matrix jac_root = problem.jacobian(*problem.root);
  const double nu = compute_nu(model);
  const double bound = std::min(problem.kappa, nu);
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    const double t = error_at(trace, k);
    if (!(t < bound))
      fail(ErrorCode::domain, "invertibility check: iterate outside min(kappa, nu)");
    const double lhs = operator_norm(solve_checked(problem.jacobian(trace.iterates[k]), jac_root));
    const double rhs = 1.0 / std::abs(model.fprime(t));
    result.compare("invertibility", static_cast<double>(k), lhs, rhs,
                   slack_scale * (1.0 + std::abs(rhs)));
  }
  return result;
}

CheckResult check_linearization_bound(const Problem& problem, const MajorantModel& model,
                                      const NewtonTrace& trace, double slack_scale) {
  if (!problem.root) fail(ErrorCode::invalid_argument, "linearization check needs a known root");
  CheckResult result;
  const Vector& root = *problem.root;
  const Matrix jac_root_inv = inverse_checked(problem.jacobian(root));
  const Vector residual_at_root = problem.evaluate(root);
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    const double t = error_at(trace, k);
    if (!(t < problem.kappa))
      fail(ErrorCode::domain, "linearization check: iterate outside kappa");
    const Vector& x = trace.iterates[k];
    const Vector linearization_error =
        residual_at_root - problem.evaluate(x) - problem.jacobian(x) * (root - x);
    const double lhs = (jac_root_inv * linearization_error).norm();
    const double rhs = t * model.fprime(t) - model.f(t);
    result.compare("taylor", static_cast<double>(k), lhs, rhs,
                   slack_scale * (1.0 + std::abs(rhs)));
  }
  return result;
}

CheckResult check_envelope(const NewtonTrace& trace, const ScalarTrace& scalar,
                           double slack_scale) {
  CheckResult result;
  const std::size_t n = std::min(trace.error_norms.size(), scalar.t.size());
  for (std::size_t k = 0; k < n; ++k) {
    result.compare("envelope", static_cast<double>(k), trace.error_norms[k],
                   scalar.t[k], slack_scale * (1.0 + std::abs(scalar.t[k])));
  }
  return result;
}

CheckResult check_contraction(const NewtonTrace& trace, const MajorantModel& model,
                              double slack_scale) {
  CheckResult result;
  for (std::size_t k = 0; k + 1 < trace.error_norms.size(); ++k) {
    const double rhs = std::abs(newton_scalar_map(model, trace.error_norms[k]));
    result.compare("contraction", static_cast<double>(k), trace.error_norms[k + 1],
                   rhs, slack_scale * (1.0 + std::abs(rhs)));
  }
  return result;
}

RateReport check_rates(const NewtonTrace& trace, const ScalarTrace& scalar,
                       std::optional<double> p, double slack_scale, double threshold) {
  RateReport report;
  const auto& err = trace.error_norms;
  if (err.size() < 2) return report;

  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    if (err[k] > 0.0) report.superlinear_tail = err[k + 1] / err[k];
  }
  std::size_t above = 0;
  for (double e : err)
    if (e >= threshold) ++above;
  report.pre_threshold = above;
  report.tail_applicable = above >= 5;
  if (report.tail_applicable && !(report.superlinear_tail < 0.1)) {
    report.tail_ok = false;
    report.violations.push_back({"superlinear_tail", static_cast<double>(err.size() - 1),
                                 report.superlinear_tail, 0.1});
  }
  if (report.tail_applicable) {
    // Ratios among iterates above the threshold; entries below it are
    // roundoff-dominated and excluded.
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < above; ++k)
      if (err[k] > 0.0) ratios.push_back(err[k + 1] / err[k]);
    const std::size_t window = std::min<std::size_t>(3, ratios.size() - 1);
    for (std::size_t j = ratios.size() - window; j < ratios.size(); ++j) {
      if (!(ratios[j] < ratios[j - 1])) {
        report.tail_ok = false;
        report.violations.push_back(
            {"superlinear_tail_monotone", static_cast<double>(j), ratios[j], ratios[j - 1]});
      }
    }
  }

  if (!p) return report;
  const double order = *p + 1.0;

  bool bound_ok = true;
  const std::size_t n = std::min(err.size(), scalar.t.size());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (k >= scalar.ratio_order.size()) break;
    const double rhs = scalar.ratio_order[k] * std::pow(err[k], order);
    const double slack = slack_scale * (1.0 + std::abs(rhs));
    if (!(err[k + 1] <= rhs + slack)) {
      bound_ok = false;
      report.violations.push_back({"order_bound", static_cast<double>(k), err[k + 1], rhs});
    }
  }
  report.order_bound_ok = bound_ok;

  // Ratios whose numerator sits below the stopping threshold are evaluation
  // noise; monotonicity is asserted on the meaningful prefix only.
  const std::size_t usable = scalar.pre_threshold_count();
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < usable && k < scalar.ratio_order.size(); ++k) {
    const double ratio = scalar.ratio_order[k];
    if (!(ratio < prev)) {
      monotone = false;
      report.violations.push_back({"order_monotone", static_cast<double>(k), ratio, prev});
    }
    prev = ratio;
    report.order_tail = ratio;
  }
  report.order_monotone_ok = monotone;
  return report;
}

CheckResult check_uniqueness(const Problem& problem, double sigma, int probes,
                             std::uint64_t seed) {
  if (!problem.root) fail(ErrorCode::invalid_argument, "uniqueness check needs a known root");
  if (!(sigma > 0.0)) fail(ErrorCode::invalid_argument, "uniqueness check: sigma must be positive");
  CheckResult result;
  const double ball = std::min(sigma, problem.kappa);
  Problem probe_problem = problem;
  probe_problem.kappa = ball;

  std::mt19937_64 rng(seed);
  SolveOptions opt;
  for (int i = 0; i < probes; ++i) {
    const Vector x0 = i == 0 ? *problem.root
                             : random_point_in_ball(*problem.root, 0.999 * ball, rng);
    const NewtonTrace trace = newton_solve(probe_problem, x0, opt);
    if (trace.status != SolveStatus::converged) continue;
    const double distance = (trace.iterates.back() - *problem.root).norm();
    if (distance > 1e-8) {
      result.ok = false;
      result.violations.push_back({"uniqueness", static_cast<double>(i), distance, 1e-8});
    }
  }
  // The root must also be the only point with a vanishing residual.
  for (int i = 0; i < probes; ++i) {
    Vector y = random_point_in_ball(*problem.root, 0.999 * ball, rng);
    if ((y - *problem.root).norm() < 1e-6 * ball) continue;
    const double residual = problem.evaluate(y).norm();
    if (!(residual > 1e-12)) {
      result.ok = false;
      result.violations.push_back({"uniqueness_residual", static_cast<double>(i), residual, 1e-12});
    }
  }
  return result;
}

bool CertificationReport::passed() const {
  if (!model_hypotheses.ok()) return false;
  if (!hypothesis.ok) return false;
  if (!invertibility.ok || !taylor.ok || !contraction.ok || !envelope.ok) return false;
  if (!rates.ok()) return false;
  if (uniqueness && !uniqueness->ok) return false;
  return true;
}

std::vector<CheckViolation> CertificationReport::all_violations() const {
  std::vector<CheckViolation> all;
  auto append = [&all](const std::vector<CheckViolation>& v) {
    all.insert(all.end(), v.begin(), v.end());
  };
  append(hypothesis.violations);
  append(invertibility.violations);
  append(taylor.violations);
  append(contraction.violations);
  append(envelope.violations);
  append(rates.violations);
  if (uniqueness) append(uniqueness->violations);
  return all;
}

CertificationReport certify(const Problem& problem, const MajorantModel& model,
                            const NewtonTrace& trace, const CertifyOptions& opt) {
  if (!problem.root) fail(ErrorCode::invalid_argument, "certify: problem needs a known root");
  if (trace.iterates.empty()) fail(ErrorCode::invalid_argument, "certify: empty trace");

  CertificationReport report;
  report.model_hypotheses = verify_hypotheses(model);
  if (!report.model_hypotheses.h1_ok || !report.model_hypotheses.h2_ok)
    fail(ErrorCode::model, "certify: model fails sampled h1/h2");
  report.radii = compute_radii(model, problem.kappa);

  const double t0 = trace.error_norms.front();
  ScalarTrace scalar;
  if (t0 == 0.0) {
    scalar.t.push_back(0.0);
    scalar.converged = true;
    scalar.atol = opt.scalar_atol;
  } else {
    if (!(t0 < report.radii.r))
      fail(ErrorCode::domain, "certify: starting distance outside the certified radius");
    ScalarSequenceOptions sopt;
    sopt.max_iters = static_cast<int>(trace.iterates.size()) - 1;
    sopt.atol = opt.scalar_atol;
    scalar = scalar_sequence(model, t0, sopt, report.radii.rho);
  }

  report.hypothesis = check_majorant_hypothesis(problem, model, opt.hypothesis_samples,
                                                opt.tau_samples, opt.seed, opt.slack_scale);
  report.invertibility = check_invertibility_bound(problem, model, trace, opt.slack_scale);
  report.taylor = check_linearization_bound(problem, model, trace, opt.slack_scale);
  report.contraction = check_contraction(trace, model, opt.slack_scale);
  report.envelope = check_envelope(trace, scalar, opt.slack_scale);
  report.rates = check_rates(trace, scalar, model.rate_exponent, opt.slack_scale,
                             opt.scalar_atol);
  if (opt.uniqueness_probes > 0)
    report.uniqueness =
        check_uniqueness(problem, report.radii.sigma, opt.uniqueness_probes, opt.seed);
  return report;
}

}  // namespace mn
