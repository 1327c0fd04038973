#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mn/linalg.hpp"
#include "mn/scalar_majorant.hpp"

namespace mn {

/// Nonlinear system F = 0 on a ball.  The ball is centered at the root when
/// one is declared, otherwise at the starting point of a solve.
struct Problem {
  int dim = 0;
  std::function<Vector(const Vector&)> evaluate;
  std::function<Matrix(const Vector&)> jacobian;
  std::optional<Vector> root;
  double kappa = 0.0;
  std::string name = "custom";
};

/// Central-difference Jacobian with step sqrt(eps) * (1 + |x_i|) per column.
std::function<Matrix(const Vector&)> finite_difference_jacobian(
    std::function<Vector(const Vector&)> evaluate, int dim);

/// Validates the declared root (residual and Jacobian invertibility) before
/// returning the assembled problem.  Pass a null jacobian to fall back to
/// finite differences.
Problem make_problem(int dim, std::function<Vector(const Vector&)> evaluate,
                     std::function<Matrix(const Vector&)> jacobian,
                     std::optional<Vector> root, double kappa,
                     std::string name = "custom");

enum class SolveStatus { converged, max_iters, singular_jacobian, left_domain, nonfinite };
const char* to_string(SolveStatus status);

struct NewtonTrace {
  std::vector<Vector> iterates;
  std::vector<double> residual_norms;  // per iterate
  std::vector<double> step_norms;      // between consecutive iterates
  std::vector<double> error_norms;     // per iterate; empty when the root is unknown
  SolveStatus status = SolveStatus::max_iters;

  std::size_t iterations() const {
    return iterates.empty() ? 0 : iterates.size() - 1;
  }
  double final_error() const {
    return error_norms.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : error_norms.back();
  }
};

struct SolveOptions {
  int max_iters = 100;
  double step_atol = 1e-14;
  double residual_atol = 1e-14;
};

/// Plain Newton iteration with dense partially pivoted solves, a domain-ball
/// guard, and a full trace.  No damping or line search.
NewtonTrace newton_solve(const Problem& problem, const Vector& x0,
                         const SolveOptions& opt = {});

/// The 1-D odd extension F(x) = sign(x) f(|x|) of a scalar model; its Newton
/// iteration 2-cycles exactly when started at the contraction boundary rho.
/// Requires the model to satisfy h1/h2 with the contraction bound attained.
Problem worst_case_instance(const MajorantModel& model, const RootFindOptions& opt = {});

/// True when the trace shows a period-2 orbit without converging.
bool is_two_cycle(const NewtonTrace& trace, double tol = 1e-10);

}  // namespace mn
