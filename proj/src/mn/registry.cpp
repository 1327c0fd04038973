#include "mn/registry.hpp"

#include <cmath>

#include "mn/error.hpp"

namespace mn {

namespace {

// Odd reflection of a scalar model; matches the model bound with equality on
// every ray through the origin.
Problem odd_extension(const MajorantModel& model, double kappa, std::string name) {
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
  return make_problem(1, evaluate, jacobian, root, kappa, std::move(name));
}

// The even part of e^{-x} + x^2 - 1 grows on the negative ray faster than the
// scalar model allows, so the registry problem is the odd reflection of the
// model (which matches it with equality on every ray).

Problem make_cubic(double kappa) {
  auto evaluate = [](const Vector& x) {
    Vector out(1);
    out(0) = x(0) * x(0) * x(0) / 3.0 - x(0);
    return out;
  };
  auto jacobian = [](const Vector& x) {
    Matrix out(1, 1);
    out(0, 0) = x(0) * x(0) - 1.0;
    return out;
  };
  Vector root(1);
  root(0) = 0.0;
  return make_problem(1, evaluate, jacobian, root, kappa, "cubic_1d");
}

Problem make_poly2d(double kappa) {
  auto evaluate = [](const Vector& x) {
    Vector out(2);
    out(0) = x(0) + x(1) + x(0) * x(0);
    out(1) = x(0) - x(1) + x(1) * x(1);
    return out;
  };
  auto jacobian = [](const Vector& x) {
    Matrix out(2, 2);
    out(0, 0) = 1.0 + 2.0 * x(0);
    out(0, 1) = 1.0;
    out(1, 0) = 1.0;
    out(1, 1) = -1.0 + 2.0 * x(1);
    return out;
  };
  Vector root = Vector::Zero(2);
  return make_problem(2, evaluate, jacobian, root, kappa, "poly2d");
}

LipschitzDensity cubic_density() {
  LipschitzDensity::Segment seg;
  seg.lo = 0.0;
  seg.hi = 5.0;
  seg.coef = {0.0, 2.0, 0.0, 0.0};  // L(u) = 2u
  return LipschitzDensity::piecewise({seg});
}

}  // namespace

const std::vector<RegistryEntry>& registry_entries() {
  static const std::vector<RegistryEntry> entries = {
      {"exp_quadratic_1d", "F(x) = e^{-x} + x^2 - 1, matched by its own scalar model", 1.5},
      {"power_5_3_1d", "odd extension of t^{5/3} - t, superlinear but not quadratic", 5.0},
      {"cubic_1d", "F(x) = x^3/3 - x, density L(u) = 2u", 5.0},
      {"poly2d", "F(x,y) = (x + y + x^2, x - y + y^2), Lipschitz with K = sqrt(2)", 10.0},
  };
  return entries;
}

std::vector<std::string> registry_ids() {
  std::vector<std::string> ids;
  for (const auto& entry : registry_entries()) ids.push_back(entry.id);
  return ids;
}

bool registry_has(std::string_view id) {
  for (const auto& entry : registry_entries())
    if (entry.id == id) return true;
  return false;
}

Problem registry_problem(std::string_view id, std::optional<double> kappa) {
  double k = 0.0;
  for (const auto& entry : registry_entries())
    if (entry.id == id) k = entry.default_kappa;
  if (k == 0.0) fail(ErrorCode::unknown_name, "unknown registry problem: " + std::string(id));
  if (kappa) {
    if (!(*kappa > 0.0))
      fail(ErrorCode::invalid_argument, "registry_problem: kappa must be positive");
    k = *kappa;
  }
  if (id == "exp_quadratic_1d")
    return odd_extension(example_model("exp_quadratic"), k, "exp_quadratic_1d");
  if (id == "power_5_3_1d") return odd_extension(example_model("power_5_3"), k, "power_5_3_1d");
  if (id == "cubic_1d") return make_cubic(k);
  return make_poly2d(k);
}

MajorantModel registry_matched_model(std::string_view id) {
  if (id == "exp_quadratic_1d") return example_model("exp_quadratic");
  if (id == "power_5_3_1d") return example_model("power_5_3");
  if (id == "cubic_1d") return generalized_model(cubic_density(), 1.0);
  if (id == "poly2d") return holder_model({std::sqrt(2.0), 1.0});
  fail(ErrorCode::unknown_name, "unknown registry problem: " + std::string(id));
}

}  // namespace mn
