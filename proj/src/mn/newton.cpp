#include "mn/newton.hpp"

#include <cmath>

#include "mn/error.hpp"

namespace mn {

std::function<Matrix(const Vector&)> finite_difference_jacobian(
    std::function<Vector(const Vector&)> evaluate, int dim) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return [evaluate = std::move(evaluate), dim, root_eps](const Vector& x) {
    Matrix jac(dim, dim);
    Vector probe = x;
    for (int i = 0; i < dim; ++i) {
      const double h = root_eps * (1.0 + std::abs(x(i)));
      probe(i) = x(i) + h;
      const Vector forward = evaluate(probe);
      probe(i) = x(i) - h;
      const Vector backward = evaluate(probe);
      probe(i) = x(i);
      jac.col(i) = (forward - backward) / (2.0 * h);
    }
    return jac;
  };
}

Problem make_problem(int dim, std::function<Vector(const Vector&)> evaluate,
                     std::function<Matrix(const Vector&)> jacobian,
                     std::optional<Vector> root, double kappa, std::string name) {
  if (dim <= 0) fail(ErrorCode::invalid_argument, "make_problem: dim must be positive");
  if (!evaluate) fail(ErrorCode::invalid_argument, "make_problem: missing evaluator");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    fail(ErrorCode::invalid_argument, "make_problem: kappa must be finite and positive");
  Problem problem;
  problem.dim = dim;
  problem.evaluate = std::move(evaluate);
  problem.jacobian =
      jacobian ? std::move(jacobian) : finite_difference_jacobian(problem.evaluate, dim);
  problem.kappa = kappa;
  problem.name = std::move(name);
  if (root) {
    if (root->size() != dim)
      fail(ErrorCode::invalid_argument, "make_problem: root has wrong dimension");
    const double residual = problem.evaluate(*root).norm();
    if (!(residual <= 1e-12 * (1.0 + root->norm())))
      fail(ErrorCode::invalid_argument, "make_problem: declared root has nonzero residual");
    inverse_checked(problem.jacobian(*root));  // throws when singular
    problem.root = std::move(root);
  }
  return problem;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::singular_jacobian: return "singular_jacobian";
    case SolveStatus::left_domain: return "left_domain";
    case SolveStatus::nonfinite: return "nonfinite";
  }
  return "unknown";
}

NewtonTrace newton_solve(const Problem& problem, const Vector& x0,
                         const SolveOptions& opt) {
  if (x0.size() != problem.dim)
    fail(ErrorCode::invalid_argument, "newton_solve: x0 has wrong dimension");
  if (opt.max_iters < 0)
    fail(ErrorCode::invalid_argument, "newton_solve: negative max_iters");
  const Vector center = problem.root ? *problem.root : x0;
  if (!((x0 - center).norm() < problem.kappa))
    fail(ErrorCode::domain, "newton_solve: x0 outside the domain ball");

  NewtonTrace trace;
  const bool track_errors = problem.root.has_value();
  auto record = [&](const Vector& x) {
    trace.iterates.push_back(x);
    trace.residual_norms.push_back(problem.evaluate(x).norm());
    if (track_errors) trace.error_norms.push_back((x - *problem.root).norm());
  };

  record(x0);
  trace.status = SolveStatus::max_iters;
  for (int k = 0; k < opt.max_iters; ++k) {
    const Vector& x = trace.iterates.back();
    if (trace.residual_norms.back() <= opt.residual_atol) {
      trace.status = SolveStatus::converged;
      return trace;
    }
    Matrix jac = problem.jacobian(x);
    if (!jac.allFinite()) {
      trace.status = SolveStatus::nonfinite;
      return trace;
    }
    Vector step;
    try {
      step = solve_checked(jac, problem.evaluate(x));
    } catch (const Error& e) {
      trace.status = e.code() == ErrorCode::singular ? SolveStatus::singular_jacobian
                                                     : SolveStatus::nonfinite;
      return trace;
    }
    const Vector next = x - step;
    if (!next.allFinite() || !std::isfinite(step.norm())) {
      trace.status = SolveStatus::nonfinite;
      return trace;
    }
    record(next);
    trace.step_norms.push_back(step.norm());
    if (!std::isfinite(trace.residual_norms.back())) {
      trace.status = SolveStatus::nonfinite;
      return trace;
    }
    if ((next - center).norm() >= problem.kappa) {
      trace.status = SolveStatus::left_domain;
      return trace;
    }
    if (step.norm() <= opt.step_atol || trace.residual_norms.back() <= opt.residual_atol) {
      trace.status = SolveStatus::converged;
      return trace;
    }
  }
  return trace;
}

Problem worst_case_instance(const MajorantModel& model, const RootFindOptions& opt) {
  const HypothesisReport hyp = verify_hypotheses(model);
  if (!hyp.h1_ok || !hyp.h2_ok)
    fail(ErrorCode::model, "worst_case_instance: model fails sampled h1/h2");
  const double domain = std::min(model.domain_bound, opt.domain_cap);
  const RadiiReport radii = compute_radii(model, domain, opt);
  if (!radii.rho_is_optimal)
    fail(ErrorCode::model,
         "worst_case_instance: contraction bound never attained, no 2-cycle witness");

  auto f = model.f;
  auto fp = model.fprime;
  auto evaluate = [f](const Vector& x) {
    Vector out(1);
    const double v = x(0);
    const double sign = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    out(0) = sign * f(std::abs(v));
    return out;
  };
  auto jacobian = [fp](const Vector& x) {
    Matrix out(1, 1);
    out(0, 0) = fp(std::abs(x(0)));
    return out;
  };
  Vector root(1);
  root(0) = 0.0;
  return make_problem(1, evaluate, jacobian, root, domain,
                      "worst_case(" + model.name + ")");
}

bool is_two_cycle(const NewtonTrace& trace, double tol) {
  if (trace.iterates.size() < 3) return false;
  // Converging onto the declared root is not an orbit; landing on some other
  // zero after drifting off a near-cycle still counts.
  if (trace.status == SolveStatus::converged &&
      (trace.error_norms.empty() ||
       trace.error_norms.back() <= tol * (1.0 + trace.error_norms.front())))
    return false;
  const Vector& x0 = trace.iterates[0];
  const Vector& x1 = trace.iterates[1];
  const Vector& x2 = trace.iterates[2];
  const double scale = 1.0 + x0.norm();
  return (x2 - x0).norm() <= tol * scale && (x1 - x0).norm() > tol * scale;
}

}  // namespace mn
