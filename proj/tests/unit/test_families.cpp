#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mn/error.hpp"
#include "mn/families.hpp"

using namespace mn;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("holder model: construction") {
  const MajorantModel h = holder_model({1.0, 1.0});
  CHECK(h.f(0.0) == 0.0);
  CHECK(h.fprime(0.0) == -1.0);
  CHECK(h.fprime(0.5) == -0.5);
  CHECK(*h.rate_exponent == 1.0);

  const MajorantModel k2 = holder_model({2.0, 0.5});
  CHECK(std::abs(compute_nu(k2) - 0.25) <= 1e-12);

  CHECK_THROWS_AS(holder_model({-1.0, 1.0}), Error);
  CHECK_THROWS_AS(holder_model({1.0, 0.0}), Error);
  CHECK_THROWS_AS(holder_model({1.0, 1.5}), Error);
}

TEST_CASE("holder radii: closed forms") {
  const RadiiReport rep = holder_radii({1.0, 1.0}, 10.0);
  CHECK(rep.nu == 1.0);
  CHECK(rep.rho == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(rep.sigma == 2.0);
  CHECK(rep.r == rep.rho);
  CHECK(rep.rho_is_optimal);

  CHECK(holder_radii({1.0, 0.5}, 10.0).rho == doctest::Approx(0.5625).epsilon(1e-15));

  // The optimality claim needs rho strictly below kappa.
  const RadiiReport border = holder_radii({1.0, 1.0}, holder_radii({1.0, 1.0}, 10.0).rho);
  CHECK(border.r == border.rho);
  CHECK_FALSE(border.rho_is_optimal);

  const RadiiReport small = holder_radii({1.0, 1.0}, 0.25);
  CHECK(small.r == 0.25);
  CHECK(small.sigma == 0.25);

  CHECK_THROWS_AS(holder_radii({1.0, 1.0}, 0.0), Error);
}

TEST_CASE("contraction interval can resume past rho") {
  // Heavy mass early pushes |n_f(t)|/t through 1 at t = 1/12; the near-flat
  // stretch afterwards lets it sink below 1 again.  rho keeps the first
  // crossing and the report flags the later contraction window.
  LipschitzDensity::Segment heavy;
  heavy.lo = 0.0;
  heavy.hi = 0.1;
  heavy.coef = {8.0, 0.0, 0.0, 0.0};
  LipschitzDensity::Segment faint;
  faint.lo = 0.1;
  faint.hi = 10.0;
  faint.coef = {0.001, 0.0, 0.0, 0.0};
  const LipschitzDensity density = LipschitzDensity::piecewise({heavy, faint});
  const MajorantModel model = generalized_model(density);

  const RadiiReport radii = compute_radii(model, 10.0);
  CHECK(std::abs(radii.rho - 1.0 / 12.0) <= 1e-12);
  CHECK(radii.contraction_resumes);
  CHECK(radii.rho_is_optimal);
  // Past rho the ratio indeed dips below 1 again.
  const double probe = 0.5;
  CHECK(model.f(probe) / (probe * model.fprime(probe)) - 1.0 < 1.0);
}

TEST_CASE("holder radii agree with the generic computation") {
  for (double K : {0.5, 1.0, 2.0, 4.0}) {
    for (double p : {0.25, 0.5, 0.75, 1.0}) {
      const double kappa = 50.0;
      const RadiiReport closed = holder_radii({K, p}, kappa);
      const RadiiReport numeric = compute_radii(holder_model({K, p}), kappa);
      CHECK(std::abs(closed.nu - numeric.nu) <= 1e-10);
      CHECK(std::abs(closed.rho - numeric.rho) <= 1e-10);
      CHECK(std::abs(closed.sigma - numeric.sigma) <= 1e-10);
      CHECK(std::abs(closed.r - numeric.r) <= 1e-10);
      CHECK(numeric.rho_is_optimal == closed.rho_is_optimal);
    }
  }
}

TEST_CASE("lipschitz radius") {
  CHECK(lipschitz_radius(3.0, 1.0) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(lipschitz_radius(1.0, 1.0) == holder_radii({1.0, 1.0}, 10.0).rho);
  CHECK(lipschitz_radius(2.0, 1.0) == lipschitz_radius(1.0, 1.0) / 2.0);
  CHECK_THROWS_AS(lipschitz_radius(0.0, 1.0), Error);
}

TEST_CASE("constant density reproduces the p=1 power model") {
  const LipschitzDensity density = LipschitzDensity::constant(1.5, 8.0);
  const MajorantModel general = generalized_model(density);
  const MajorantModel holder = holder_model({1.5, 1.0});
  for (int i = 0; i <= 64; ++i) {
    const double t = 8.0 * i / 64.0 * 0.999;
    CHECK(general.f(t) == doctest::Approx(holder.f(t)).epsilon(1e-12));
    CHECK(general.fprime(t) == doctest::Approx(holder.fprime(t)).epsilon(1e-12));
  }
  CHECK(general.f(0.0) == 0.0);
  CHECK(general.fprime(0.0) == -1.0);
}

TEST_CASE("linear density: closed forms and radii") {
  LipschitzDensity::Segment seg;
  seg.lo = 0.0;
  seg.hi = 5.0;
  seg.coef = {0.0, 2.0, 0.0, 0.0};  // L(u) = 2u
  const LipschitzDensity density = LipschitzDensity::piecewise({seg});
  const MajorantModel model = generalized_model(density, 1.0);
  CHECK(*model.rate_exponent == 1.0);
  for (int i = 1; i <= 40; ++i) {
    const double t = 4.9 * i / 40.0;
    CHECK(model.f(t) == doctest::Approx(t * t * t / 3.0 - t).epsilon(1e-13));
    CHECK(model.fprime(t) == doctest::Approx(t * t - 1.0).epsilon(1e-14));
  }
  const double nu = compute_nu(model);
  CHECK(std::abs(nu - 1.0) <= 1e-12);
  CHECK(std::abs(compute_rho(model, nu) - std::sqrt(0.6)) <= 1e-12);
  CHECK(std::abs(compute_sigma(model, 4.0) - std::sqrt(3.0)) <= 1e-12);

  // The scalar recursion expressed through the integrals matches |n_f|.
  for (double t : {0.1, 0.3, 0.6, 0.9}) {
    const double via_integrals =
        density.first_moment(t) / (1.0 - density.integral(t));
    CHECK(via_integrals ==
          doctest::Approx(std::abs(newton_scalar_map(model, t))).epsilon(1e-12));
  }
}

TEST_CASE("cubic-coefficient density: exact integrals vs trapezoid refinement") {
  LipschitzDensity::Segment seg;
  seg.lo = 0.0;
  seg.hi = 2.0;
  seg.coef = {1.0, 1.0, 1.0, 1.0};  // L(u) = 1 + u + u^2 + u^3
  const LipschitzDensity density = LipschitzDensity::piecewise({seg});

  auto closed_i0 = [](double t) { return t + t * t / 2 + t * t * t / 3 + t * t * t * t / 4; };
  auto closed_i1 = [](double t) {
    return t * t / 2 + t * t * t / 3 + t * t * t * t / 4 + t * t * t * t * t / 5;
  };
  for (double t : {0.3, 0.7, 1.1, 1.9}) {
    CHECK(density.integral(t) == doctest::Approx(closed_i0(t)).epsilon(1e-14));
    CHECK(density.first_moment(t) == doctest::Approx(closed_i1(t)).epsilon(1e-14));
  }

  // Independent quadrature oracle: composite trapezoid refined to 2^20 panels
  // lands on the closed-form antiderivative within 1e-10.
  const double t = 1.9;
  const int panels = 1 << 20;
  double acc = 0.5 * (density(0.0) + density(t));
  for (int i = 1; i < panels; ++i) acc += density(t * i / panels);
  acc *= t / panels;
  CHECK(std::abs(acc - closed_i0(t)) <= 1e-10);
  CHECK(std::abs(acc - density.integral(t)) <= 1e-10);
  CHECK_FALSE(density.quadrature_error().has_value());
}

TEST_CASE("tabulated density") {
  std::vector<double> u, values;
  for (int i = 0; i <= 200; ++i) {
    u.push_back(2.0 * i / 200.0);
    values.push_back(1.0 / (1.0 + u.back()));
  }
  const LipschitzDensity density = LipschitzDensity::tabulated(u, values);
  for (double t : {0.5, 1.0, 1.8})
    CHECK(std::abs(density.integral(t) - std::log1p(t)) <= 1e-4);
  REQUIRE(density.quadrature_error().has_value());
  CHECK(*density.quadrature_error() > 0.0);
  CHECK(*density.quadrature_error() < 1e-3);

  const std::vector<double> too_short = {0.0};
  CHECK_THROWS_AS(LipschitzDensity::tabulated(too_short, too_short), Error);
  const std::vector<double> bad_u = {0.0, 1.0, 0.5};
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(LipschitzDensity::tabulated(bad_u, ones), Error);
  const std::vector<double> grid = {0.0, 1.0, 2.0};
  const std::vector<double> negative = {1.0, -1.0, 1.0};
  CHECK_THROWS_AS(LipschitzDensity::tabulated(grid, negative), Error);
}

TEST_CASE("order condition on densities") {
  CHECK(check_condition_h(LipschitzDensity::constant(2.0, 4.0), 1.0, 0.5));

  LipschitzDensity::Segment ramp;
  ramp.lo = 0.0;
  ramp.hi = 5.0;
  ramp.coef = {0.0, 2.0, 0.0, 0.0};
  CHECK(check_condition_h(LipschitzDensity::piecewise({ramp}), 1.0, 1.0));

  std::vector<double> u, values;
  for (int i = 0; i <= 300; ++i) {
    u.push_back(3.0 * i / 300.0);
    values.push_back(1.0 / ((1.0 + u.back()) * (1.0 + u.back())));
  }
  const LipschitzDensity decaying = LipschitzDensity::tabulated(u, values);
  // t/(1+t)^2 peaks at t = 1 and then decreases.
  CHECK_FALSE(check_condition_h(decaying, 0.0, 2.9));
  CHECK_THROWS_AS(generalized_model(decaying, 0.0), Error);

  std::vector<double> u2, v2;
  for (int i = 0; i <= 100; ++i) {
    u2.push_back(2.0 * i / 100.0);
    v2.push_back(1.0 / (1.0 + u2.back()));
  }
  CHECK(check_condition_h(LipschitzDensity::tabulated(u2, v2), 0.0, 1.9));
}

TEST_CASE("example models") {
  const MajorantModel power = example_model("power", 2.0 / 3.0);
  CHECK(power.f(0.1) == doctest::Approx(-0.078455653099681168).epsilon(1e-14));
  CHECK_THROWS_AS(example_model("power"), Error);
  CHECK_THROWS_AS(example_model("power", 1.5), Error);

  const MajorantModel p53 = example_model("power_5_3");
  CHECK(*p53.rate_exponent == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(example_model("power_5_3", 0.5), Error);

  const MajorantModel expq = example_model("exp_quadratic");
  CHECK(expq.fprime(0.0) == -1.0);
  REQUIRE(expq.rate_exponent.has_value());  // sampled order condition holds
  CHECK(*expq.rate_exponent == 1.0);

  // power with p = 1 is the K = 2 member of the power-condition family
  const MajorantModel pow1 = example_model("power", 1.0);
  const MajorantModel k2 = holder_model({2.0, 1.0});
  for (double t : {0.1, 0.25, 0.4})
    CHECK(pow1.f(t) == doctest::Approx(k2.f(t)).epsilon(1e-15));

  CHECK_THROWS_AS(example_model("does_not_exist"), Error);
}

TEST_CASE("density files") {
  const fs::path piecewise = temp_file("mn_density_test.txt",
                                       "# L(u) = 2u on [0,5)\n"
                                       "0 5 0 2 0 0\n");
  const LipschitzDensity loaded = LipschitzDensity::load_piecewise(piecewise.string());
  CHECK(loaded.integral(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(loaded.domain_bound() == 5.0);

  const fs::path table = temp_file("mn_density_table.csv",
                                   "u,L\n"
                                   "0,1\n"
                                   "1,1\n"
                                   "2,1\n");
  const LipschitzDensity tab = LipschitzDensity::load_table(table.string());
  CHECK(tab.integral(2.0) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(LipschitzDensity::load_piecewise("/nonexistent/file.txt"), Error);
  const fs::path malformed = temp_file("mn_density_bad.txt", "0 5 0\n");
  CHECK_THROWS_AS(LipschitzDensity::load_piecewise(malformed.string()), Error);

  fs::remove(piecewise);
  fs::remove(table);
  fs::remove(malformed);
}
