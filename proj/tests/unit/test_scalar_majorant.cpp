#include <doctest.h>

#include <cmath>

#include "mn/error.hpp"
#include "mn/scalar_majorant.hpp"

using namespace mn;

namespace {

MajorantModel holder11() {
  MajorantModel model;
  model.f = [](double t) { return t * t / 2.0 - t; };
  model.fprime = [](double t) { return t - 1.0; };
  model.rate_exponent = 1.0;
  model.name = "holder11";
  return model;
}

MajorantModel power53() {
  MajorantModel model;
  model.f = [](double t) { return std::pow(t, 5.0 / 3.0) - t; };
  model.fprime = [](double t) { return (5.0 / 3.0) * std::pow(t, 2.0 / 3.0) - 1.0; };
  model.rate_exponent = 2.0 / 3.0;
  model.name = "power53";
  return model;
}

MajorantModel exp_quadratic() {
  MajorantModel model;
  model.f = [](double t) { return std::expm1(-t) + t * t; };
  model.fprime = [](double t) { return 2.0 * t - std::exp(-t); };
  model.rate_exponent = 1.0;
  model.name = "exp_quadratic";
  return model;
}

MajorantModel linear_negative(double domain) {
  MajorantModel model;
  model.f = [](double t) { return -t; };
  model.fprime = [](double) { return -1.0; };
  model.domain_bound = domain;
  model.name = "linear";
  return model;
}

// Reference values computed independently at 40-digit precision:
//   exp_quadratic   nu: root of 2t = e^{-t}
//                   rho: root of e^{-t}(1 + 2t) - 3t^2 - 1 on (0, nu)
//                   sigma: positive root of t^2 = 1 - e^{-t}
constexpr double kExpQuadraticNu = 0.3517337112491958;
constexpr double kExpQuadraticRho = 0.23137907779021897;
constexpr double kExpQuadraticSigma = 0.71455638474300968;

bool code_is(const Error& e, ErrorCode code) { return e.code() == code; }

}  // namespace

TEST_CASE("newton scalar map: closed-form values and sign") {
  const MajorantModel h = holder11();
  CHECK(newton_scalar_map(h, 0.5) == doctest::Approx(-0.25).epsilon(1e-14));

  const MajorantModel p = power53();
  CHECK(newton_scalar_map(p, 0.1) ==
        doctest::Approx(-0.022409549872393104).epsilon(1e-13));

  // n_f < 0 on (0, nu) and |n_f| contracts on (0, rho)
  for (const MajorantModel& model : {holder11(), power53(), exp_quadratic()}) {
    const double nu = compute_nu(model);
    const double rho = compute_rho(model, nu);
    for (int i = 1; i <= 1000; ++i) {
      const double t_nu = nu * (1.0 - 1e-9) * i / 1000.0;
      CHECK(newton_scalar_map(model, t_nu) < 0.0);
      const double t_rho = rho * (1.0 - 1e-9) * i / 1000.0;
      CHECK(std::abs(newton_scalar_map(model, t_rho)) < t_rho);
    }
  }

  CHECK(newton_scalar_map(h, 0.0) == 0.0);
}

TEST_CASE("newton scalar map: |n_f(t)|/t vanishes at the origin") {
  const MajorantModel h = holder11();
  const double nu = 1.0;
  double prev = 1.0;
  for (int j = 1; j <= 40; ++j) {
    const double t = nu * std::ldexp(1.0, -j);
    const double ratio = std::abs(newton_scalar_map(h, t)) / t;
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("newton scalar map: domain errors") {
  const MajorantModel h = holder11();
  CHECK_THROWS_WITH_AS(newton_scalar_map(h, 1.2), doctest::Contains("f'"), Error);
  CHECK_THROWS_AS(newton_scalar_map(h, -0.1), Error);
  try {
    newton_scalar_map(h, 1.2);
  } catch (const Error& e) {
    CHECK(code_is(e, ErrorCode::domain));
  }
}

TEST_CASE("compute_nu") {
  RootFindOptions opt;
  CHECK(std::abs(compute_nu(holder11(), opt) - 1.0) <= 1e-12);
  CHECK(std::abs(compute_nu(exp_quadratic(), opt) - kExpQuadraticNu) <= 1e-12);

  MajorantModel k2p05;
  k2p05.f = [](double t) { return 2.0 * std::pow(t, 1.5) / 1.5 - t; };
  k2p05.fprime = [](double t) { return 2.0 * std::sqrt(t) - 1.0; };
  CHECK(std::abs(compute_nu(k2p05, opt) - 0.25) <= 1e-12);

  // f' never vanishes: the supremum is the domain bound itself
  CHECK(compute_nu(linear_negative(5.0), opt) == 5.0);

  MajorantModel broken;
  broken.f = [](double t) { return t; };
  broken.fprime = [](double) { return 1.0; };
  CHECK_THROWS_AS(compute_nu(broken, opt), Error);
}

TEST_CASE("compute_rho") {
  RootFindOptions opt;
  const MajorantModel h = holder11();
  const double nu_h = compute_nu(h, opt);
  CHECK(std::abs(compute_rho(h, nu_h, opt) - 2.0 / 3.0) <= 1e-12);

  const MajorantModel e = exp_quadratic();
  const double nu_e = compute_nu(e, opt);
  CHECK(std::abs(compute_rho(e, nu_e, opt) - kExpQuadraticRho) <= 1e-12);

  // h == 0 < 1 everywhere: rho = nu
  const MajorantModel lin = linear_negative(5.0);
  CHECK(compute_rho(lin, compute_nu(lin, opt), opt) == 5.0);
}

TEST_CASE("compute_sigma") {
  RootFindOptions opt;
  CHECK(std::abs(compute_sigma(holder11(), 10.0, opt) - 2.0) <= 1e-12);
  CHECK(compute_sigma(holder11(), 1.5, opt) == 1.5);  // f < 0 on all of (0, kappa)
  CHECK(std::abs(compute_sigma(exp_quadratic(), 10.0, opt) - kExpQuadraticSigma) <= 1e-12);
  CHECK(compute_sigma(linear_negative(5.0), 3.0, opt) == 3.0);
}

TEST_CASE("radii: independent fine-grid verification") {
  // No sampled violation of each defining inequality inside the returned
  // radius (10^6 points per constant).
  for (const MajorantModel& model : {holder11(), power53(), exp_quadratic()}) {
    const RadiiReport radii = compute_radii(model, 10.0);
    const int n = 1000000;
    for (int i = 1; i < n; ++i) {
      const double s = static_cast<double>(i) / n;
      const double t_nu = radii.nu * (1.0 - 1e-9) * s;
      REQUIRE(model.fprime(t_nu) < 0.0);
    }
    for (int i = 1; i < n; ++i) {
      const double t = radii.rho * (1.0 - 1e-9) * static_cast<double>(i) / n;
      REQUIRE(model.f(t) / (t * model.fprime(t)) - 1.0 < 1.0);
    }
    for (int i = 1; i < n; ++i) {
      const double t = radii.sigma * (1.0 - 1e-9) * static_cast<double>(i) / n;
      REQUIRE(model.f(t) < 0.0);
    }
  }
}

TEST_CASE("compute_radii: aggregation and flags") {
  const RadiiReport full = compute_radii(holder11(), 10.0);
  CHECK(std::abs(full.nu - 1.0) <= 1e-12);
  CHECK(std::abs(full.rho - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(full.sigma - 2.0) <= 1e-12);
  CHECK(full.r == full.rho);
  CHECK(full.rho_is_optimal);
  CHECK_FALSE(full.domain_truncated);
  CHECK(full.tolerances.grid_points == 4096);

  const RadiiReport tight = compute_radii(holder11(), 0.5);
  CHECK(tight.r == 0.5);
  CHECK_FALSE(tight.rho_is_optimal);  // rho > kappa
  CHECK(tight.sigma == 0.5);

  const RadiiReport exp_radii = compute_radii(exp_quadratic(), 10.0);
  CHECK(std::abs(exp_radii.rho - kExpQuadraticRho) <= 1e-12);
  CHECK(exp_radii.rho_is_optimal);
  CHECK(exp_radii.rho <= exp_radii.nu);
  CHECK(exp_radii.sigma <= exp_radii.kappa);

  // Unbounded domain with f' < 0 throughout truncates at the cap.
  MajorantModel lin = linear_negative(std::numeric_limits<double>::infinity());
  const RadiiReport capped = compute_radii(lin, 3.0);
  CHECK(capped.domain_truncated);
  CHECK(capped.nu == capped.tolerances.domain_cap);

  CHECK_THROWS_AS(compute_radii(holder11(), -1.0), Error);
}

TEST_CASE("scalar_sequence: frozen values and invariants") {
  SUBCASE("holder p=1 from 0.5") {
    const ScalarTrace trace = scalar_sequence(holder11(), 0.5);
    REQUIRE(trace.t.size() >= 3);
    CHECK(trace.t[0] == 0.5);
    CHECK(trace.t[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(trace.t[2] == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
    CHECK(trace.converged);
    for (std::size_t k = 0; k + 1 < trace.t.size(); ++k) {
      CHECK(trace.t[k + 1] < trace.t[k]);
      CHECK(trace.t[k] > 0.0);
      CHECK(trace.t[k] < 2.0 / 3.0);
    }
    CHECK(trace.ratio_linear.back() < 0.1);
  }

  SUBCASE("power 5/3 from 0.1") {
    const ScalarTrace trace = scalar_sequence(power53(), 0.1);
    const double expected_t[] = {0.1, 0.022409549872393104, 1.36882893463542e-3,
                                 1.1486130960216257e-5, 3.9015183283152112e-9,
                                 6.4461432718909449e-15};
    const double expected_order[] = {1.0401591645398851, 0.76847065517677022,
                                     0.68065201656391968, 0.66723278684845063,
                                     0.66666942035669597};
    REQUIRE(trace.t.size() == 6);
    for (int k = 0; k < 6; ++k)
      CHECK(trace.t[k] == doctest::Approx(expected_t[k]).epsilon(1e-9));
    REQUIRE(trace.ratio_order.size() == 5);
    for (int k = 0; k < 5; ++k) {
      CHECK(trace.ratio_order[k] == doctest::Approx(expected_order[k]).epsilon(1e-9));
      if (k > 0) CHECK(trace.ratio_order[k] < trace.ratio_order[k - 1]);
    }
    CHECK(std::abs(trace.ratio_order.back() - 2.0 / 3.0) < 1e-3);
    CHECK(trace.pre_threshold_count() == 5);  // last entry sits below atol
  }

  SUBCASE("error paths") {
    CHECK_THROWS_AS(scalar_sequence(holder11(), 0.7), Error);   // outside rho
    CHECK_THROWS_AS(scalar_sequence(holder11(), 0.0), Error);
    CHECK_THROWS_AS(scalar_sequence(holder11(), 0.5, {100, -1.0}), Error);
    // A loose guard lets the first step escape; that is an iteration error.
    CHECK_THROWS_AS(scalar_sequence(holder11(), 0.8, {}, 0.9), Error);
    try {
      scalar_sequence(holder11(), 0.8, {}, 0.9);
    } catch (const Error& e) {
      CHECK(code_is(e, ErrorCode::iteration));
    }
  }

  SUBCASE("no order column without an exponent") {
    MajorantModel bare = holder11();
    bare.rate_exponent.reset();
    const ScalarTrace trace = scalar_sequence(bare, 0.5);
    CHECK(trace.ratio_order.empty());
    CHECK_FALSE(trace.ratio_linear.empty());
  }
}

TEST_CASE("a_priori_bound") {
  CHECK(a_priori_bound(1.0, 0.5, 0.0, 3) == 0.125);
  CHECK(a_priori_bound(0.5, 0.25, 1.0, 2) == 0.0625);  // exponent (2^2 - 1)/1 = 3
  CHECK(a_priori_bound(0.7, 0.3, 0.5, 0) == 0.7);
  CHECK_THROWS_AS(a_priori_bound(0.5, 0.5, 1.0, 2), Error);
  CHECK_THROWS_AS(a_priori_bound(0.5, 0.6, 1.0, 2), Error);

  // Every generated scalar sequence respects its own a-priori envelope.
  for (const MajorantModel& model : {holder11(), power53()}) {
    const ScalarTrace trace = scalar_sequence(model, model.name == "holder11" ? 0.5 : 0.1);
    const double p = *model.rate_exponent;
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
      const double bound = a_priori_bound(trace.t[0], trace.t[1], p, static_cast<int>(k));
      CHECK(trace.t[k] <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("verify_hypotheses") {
  CHECK(verify_hypotheses(holder11()).ok());
  CHECK(verify_hypotheses(power53()).ok());

  const HypothesisReport exp_rep = verify_hypotheses(exp_quadratic());
  CHECK(exp_rep.h1_ok);
  CHECK(exp_rep.h2_ok);
  REQUIRE(exp_rep.h3_ok.has_value());
  CHECK(*exp_rep.h3_ok);

  MajorantModel increasing;
  increasing.f = [](double t) { return t; };
  increasing.fprime = [](double) { return 1.0; };
  CHECK_FALSE(verify_hypotheses(increasing).h1_ok);

  // f' constant: sampled ties violate strict increase
  CHECK_FALSE(verify_hypotheses(linear_negative(5.0)).h2_ok);

  // Claiming a quadratic-order exponent for the 5/3 power model fails h3.
  MajorantModel overclaim = power53();
  overclaim.rate_exponent = 1.0;
  const HypothesisReport rep = verify_hypotheses(overclaim);
  REQUIRE(rep.h3_ok.has_value());
  CHECK_FALSE(*rep.h3_ok);
}
