#include <doctest.h>

#include <cmath>
#include <random>

#include "mn/error.hpp"
#include "mn/families.hpp"
#include "mn/newton.hpp"
#include "mn/registry.hpp"

using namespace mn;

TEST_CASE("operator norm") {
  CHECK(operator_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-14));

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = -3.0;
  CHECK(operator_norm(diag) == doctest::Approx(3.0).epsilon(1e-14));

  Matrix shift = Matrix::Zero(2, 2);
  shift(0, 1) = 1.0;
  CHECK(operator_norm(shift) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(operator_norm(Matrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("operator norm: power iteration path matches a direct decomposition") {
  // 80 x 80 exceeds the direct-decomposition limit.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix a(80, 80);
  for (int i = 0; i < 80; ++i)
    for (int j = 0; j < 80; ++j) a(i, j) = unif(rng);
  const double via_power = operator_norm(a);
  Eigen::BDCSVD<Matrix> svd(a);
  CHECK(via_power == doctest::Approx(svd.singularValues()(0)).epsilon(1e-6));
}

TEST_CASE("banach inverse bound") {
  CHECK(banach_inverse_bound(Matrix::Identity(2, 2)) == 1.0);

  Matrix half = Matrix::Identity(2, 2);
  half(0, 0) = 0.5;
  half(1, 1) = 1.5;
  CHECK(banach_inverse_bound(half) == doctest::Approx(2.0).epsilon(1e-14));

  // ||B - I|| = 0.1 here, and the bound 10/9 happens to be attained.
  Matrix narrow = Matrix::Identity(2, 2);
  narrow(0, 0) = 0.9;
  narrow(1, 1) = 1.1;
  CHECK(banach_inverse_bound(narrow) == doctest::Approx(10.0 / 9.0).epsilon(1e-12));

  // Same deviation norm, strictly conservative bound.
  Matrix inflated = Matrix::Identity(2, 2);
  inflated(0, 0) = 1.1;
  inflated(1, 1) = 1.1;
  CHECK(banach_inverse_bound(inflated) == doctest::Approx(10.0 / 9.0).epsilon(1e-12));
  CHECK(banach_inverse_bound(inflated) > 1.0 / 1.1);

  Matrix degenerate = Matrix::Identity(2, 2);
  degenerate(0, 0) = 0.0;
  degenerate(1, 1) = 2.0;
  CHECK_THROWS_AS(banach_inverse_bound(degenerate), Error);
}

TEST_CASE("banach bound dominates the true inverse norm") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = unif(rng);
    const double scale = 0.05 + 0.85 * std::uniform_real_distribution<double>(0, 1)(rng);
    m *= scale / operator_norm(m);
    const Matrix b = Matrix::Identity(n, n) + m;
    Eigen::JacobiSVD<Matrix> svd(b);
    const double true_inverse_norm = 1.0 / svd.singularValues()(n - 1);
    CHECK(banach_inverse_bound(b) >= true_inverse_norm * (1.0 - 1e-10));
  }
}

TEST_CASE("solve_checked flags singular systems") {
  Matrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  Vector rhs(2);
  rhs << 1.0, 2.0;
  CHECK_THROWS_AS(solve_checked(singular, rhs), Error);

  Matrix ok(2, 2);
  ok << 2.0, 1.0, 1.0, 3.0;
  const Vector x = solve_checked(ok, rhs);
  CHECK((ok * x - rhs).norm() <= 1e-14);
}

TEST_CASE("finite-difference jacobian") {
  const Problem poly = registry_problem("poly2d");
  auto fd = finite_difference_jacobian(poly.evaluate, 2);
  Vector x(2);
  x << 0.3, -0.2;
  CHECK(operator_norm(fd(x) - poly.jacobian(x)) <= 1e-7);
}

TEST_CASE("make_problem validation") {
  auto evaluate = [](const Vector& x) { return Vector(x); };
  Vector not_a_root(1);
  not_a_root << 0.5;
  CHECK_THROWS_AS(make_problem(1, evaluate, nullptr, not_a_root, 1.0), Error);
  CHECK_THROWS_AS(make_problem(1, evaluate, nullptr, std::nullopt, -2.0), Error);

  // x^2 has a root at 0 but a singular Jacobian there.
  auto square = [](const Vector& x) {
    Vector out(1);
    out(0) = x(0) * x(0);
    return out;
  };
  Vector zero = Vector::Zero(1);
  CHECK_THROWS_AS(make_problem(1, square, nullptr, zero, 1.0), Error);
}

TEST_CASE("newton_solve on the registry problems") {
  SUBCASE("exp_quadratic_1d") {
    const Problem problem = registry_problem("exp_quadratic_1d");
    Vector x0(1);
    x0 << 0.2;
    const NewtonTrace trace = newton_solve(problem, x0);
    CHECK(trace.status == SolveStatus::converged);
    CHECK(trace.final_error() <= 1e-12);
    for (std::size_t k = 0; k + 1 < trace.error_norms.size(); ++k)
      CHECK(trace.error_norms[k + 1] < trace.error_norms[k]);
    // First step agrees with the scalar Newton map of the matched model.
    const MajorantModel model = registry_matched_model("exp_quadratic_1d");
    CHECK(trace.iterates[1](0) ==
          doctest::Approx(newton_scalar_map(model, 0.2)).epsilon(1e-14));
  }

  SUBCASE("power_5_3_1d matches its scalar model exactly") {
    const Problem problem = registry_problem("power_5_3_1d");
    Vector x0(1);
    x0 << 0.1;
    const NewtonTrace trace = newton_solve(problem, x0);
    CHECK(trace.status == SolveStatus::converged);
    CHECK(trace.iterates[1](0) ==
          doctest::Approx(-0.022409549872393104).epsilon(1e-13));
    const MajorantModel model = registry_matched_model("power_5_3_1d");
    const ScalarTrace scalar = scalar_sequence(model, 0.1);
    const std::size_t n = std::min(scalar.t.size(), trace.error_norms.size());
    REQUIRE(n >= 5);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(trace.error_norms[k] - scalar.t[k]) <= 1e-15);

    // Per-step agreement with the closed-form recursion of the 5/3 power map,
    // up to the cancellation floor of a generic Newton step (~eps |x_k|).
    for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
      const double x = trace.iterates[k](0);
      const double a = std::abs(x);
      const double sign = x >= 0.0 ? 1.0 : -1.0;
      const double closed =
          sign * 2.0 * std::pow(a, 5.0 / 3.0) / (5.0 * std::pow(a, 2.0 / 3.0) - 3.0);
      CHECK(std::abs(trace.iterates[k + 1](0) - closed) <=
            1e-13 * std::abs(closed) + 1e-15 * a);
    }
  }

  SUBCASE("starting at the root") {
    const Problem problem = registry_problem("cubic_1d");
    const NewtonTrace trace = newton_solve(problem, Vector::Zero(1));
    CHECK(trace.status == SolveStatus::converged);
    CHECK(trace.iterations() == 0);
    CHECK(trace.residual_norms[0] == 0.0);
  }

  SUBCASE("start outside the ball") {
    const Problem problem = registry_problem("exp_quadratic_1d");  // kappa 1.5
    Vector x0(1);
    x0 << 2.0;
    CHECK_THROWS_AS(newton_solve(problem, x0), Error);
  }
}

TEST_CASE("newton_solve failure statuses") {
  SUBCASE("singular jacobian") {
    auto evaluate = [](const Vector& x) {
      Vector out(2);
      out(0) = x(0) + x(1) - 1.0;
      out(1) = x(0) + x(1) + 1.0;
      return out;
    };
    const Problem problem = make_problem(2, evaluate, nullptr, std::nullopt, 10.0);
    Vector x0 = Vector::Zero(2);
    CHECK(newton_solve(problem, x0).status == SolveStatus::singular_jacobian);
  }

  SUBCASE("leaving the domain ball") {
    auto evaluate = [](const Vector& x) {
      Vector out(1);
      out(0) = x(0) - 5.0;
      return out;
    };
    const Problem problem = make_problem(1, evaluate, nullptr, std::nullopt, 1.0);
    CHECK(newton_solve(problem, Vector::Zero(1)).status == SolveStatus::left_domain);
  }

  SUBCASE("non-finite evaluation") {
    auto evaluate = [](const Vector& x) {
      Vector out(1);
      out(0) = std::sqrt(x(0));
      return out;
    };
    auto jacobian = [](const Vector& x) {
      Matrix out(1, 1);
      out(0, 0) = 0.5 / std::sqrt(x(0));
      return out;
    };
    const Problem problem = make_problem(1, evaluate, jacobian, std::nullopt, 10.0);
    Vector x0(1);
    x0 << 0.5;
    CHECK(newton_solve(problem, x0).status == SolveStatus::nonfinite);
  }

  SUBCASE("max iterations") {
    const Problem problem = registry_problem("cubic_1d");
    Vector x0(1);
    x0 << 0.5;
    SolveOptions opt;
    opt.max_iters = 1;
    CHECK(newton_solve(problem, x0, opt).status == SolveStatus::max_iters);
  }
}

TEST_CASE("worst-case instance: 2-cycle at rho, convergence inside") {
  for (double K : {0.5, 1.0, 2.0, 4.0}) {
    for (double p : {0.25, 0.5, 0.75, 1.0}) {
      const MajorantModel model = holder_model({K, p});
      const Problem instance = worst_case_instance(model);
      const double rho = holder_radii({K, p}, 1e9).rho;

      // The boundary itself is not representable; the one-ulp start offset
      // quadruples per step and resolves the orbit to one side after roughly
      // 25 iterations.  Twelve iterations keep the drift below 1e-9 while
      // ruling out convergence.
      Vector boundary(1);
      boundary << rho;
      SolveOptions opt;
      opt.max_iters = 12;
      const NewtonTrace cycle = newton_solve(instance, boundary, opt);
      CHECK(cycle.status == SolveStatus::max_iters);
      CHECK(cycle.final_error() > 0.5 * rho);
      REQUIRE(cycle.iterates.size() >= 3);
      CHECK(std::abs(cycle.iterates[1](0) + rho) <= 1e-10);
      CHECK(std::abs(cycle.iterates[2](0) - rho) <= 1e-10);
      CHECK(is_two_cycle(cycle));

      Vector inside(1);
      inside << 0.99 * rho;
      SolveOptions long_opt;
      long_opt.max_iters = 60;
      const NewtonTrace convergent = newton_solve(instance, inside, long_opt);
      CHECK(convergent.status == SolveStatus::converged);
      CHECK(convergent.final_error() <= 1e-10);
      CHECK_FALSE(is_two_cycle(convergent));
    }
  }

  const Problem instance = worst_case_instance(holder_model({1.0, 1.0}));
  const NewtonTrace at_root = newton_solve(instance, Vector::Zero(1));
  CHECK(at_root.status == SolveStatus::converged);
  CHECK(at_root.iterations() == 0);
}

TEST_CASE("worst-case instance: rejects models without an attained bound") {
  // Total mass of L below 1: the contraction ratio never reaches 1.
  const MajorantModel bounded = generalized_model(LipschitzDensity::constant(0.5, 1.0));
  CHECK_THROWS_AS(worst_case_instance(bounded), Error);

  MajorantModel broken;
  broken.f = [](double t) { return -t; };
  broken.fprime = [](double) { return -1.0; };
  broken.domain_bound = 5.0;
  CHECK_THROWS_AS(worst_case_instance(broken), Error);
}

TEST_CASE("affine invariance of the iteration") {
  const Problem base = registry_problem("poly2d");
  Matrix a(2, 2);
  a << 1.7, 0.3, -0.2, 1.1;
  auto evaluate = [&base, a](const Vector& x) { return Vector(a * base.evaluate(x)); };
  auto jacobian = [&base, a](const Vector& x) { return Matrix(a * base.jacobian(x)); };
  const Problem transformed =
      make_problem(2, evaluate, jacobian, base.root, base.kappa, "poly2d_affine");

  Vector x0(2);
  x0 << 0.3, 0.2;
  const NewtonTrace lhs = newton_solve(base, x0);
  const NewtonTrace rhs = newton_solve(transformed, x0);
  const std::size_t n = std::min(lhs.iterates.size(), rhs.iterates.size());
  REQUIRE(n >= 4);
  for (std::size_t k = 0; k < n; ++k)
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(lhs.iterates[k](i) - rhs.iterates[k](i)) <=
            1e-10 * (1.0 + std::abs(rhs.iterates[k](i))));
}

TEST_CASE("registry") {
  CHECK(registry_ids().size() == 4);
  CHECK(registry_has("poly2d"));
  CHECK_FALSE(registry_has("nonsense"));
  CHECK_THROWS_AS(registry_problem("nonsense"), Error);
  CHECK_THROWS_AS(registry_matched_model("nonsense"), Error);

  const Problem poly = registry_problem("poly2d");
  const Matrix j0 = poly.jacobian(Vector::Zero(2));
  CHECK(j0(0, 0) == 1.0);
  CHECK(j0(0, 1) == 1.0);
  CHECK(j0(1, 0) == 1.0);
  CHECK(j0(1, 1) == -1.0);

  const Problem wide = registry_problem("poly2d", 25.0);
  CHECK(wide.kappa == 25.0);

  for (const std::string& id : registry_ids()) {
    const Problem problem = registry_problem(id);
    CHECK(problem.evaluate(*problem.root).norm() == 0.0);
    const MajorantModel model = registry_matched_model(id);
    CHECK(verify_hypotheses(model).ok());
    REQUIRE(model.rate_exponent.has_value());
  }
  CHECK(*registry_matched_model("power_5_3_1d").rate_exponent ==
        doctest::Approx(2.0 / 3.0));
  CHECK(*registry_matched_model("exp_quadratic_1d").rate_exponent == 1.0);
}
