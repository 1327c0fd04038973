#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mn/scalar_majorant.hpp"

namespace mn {

/// Parameters of the power-type condition ||J*^{-1}[J(x) - J(x* + tau(x -
/// x*))]|| <= K (1 - tau^p) ||x - x*||^p.  p = 1 is the Lipschitz case.
struct HolderParams {
  double K = 1.0;  // constant, units length^{-p}
  double p = 1.0;  // exponent in (0, 1]
};

/// f(t) = K t^{p+1}/(p+1) - t.  Satisfies h1-h3 by construction with rate
/// exponent p.
MajorantModel holder_model(const HolderParams& params);

/// Closed-form radii for the power family:
///   nu = (1/K)^{1/p},  rho = [(p+1)/((2p+1)K)]^{1/p},
///   sigma-ball radius = [(p+1)/K]^{1/p}.
RadiiReport holder_radii(const HolderParams& params, double kappa);

/// Convergence radius 2 / (3 L ||J(x*)^{-1}||) for an operator whose Jacobian
/// is L-Lipschitz; equals holder_radii with p = 1, K = L * inverse_norm.
double lipschitz_radius(double lipschitz_constant, double inverse_norm);

/// Positive integrable density L on [0, R).  Primary representation is a
/// contiguous list of polynomial segments of degree <= 3, which makes every
/// integral below exact.  Tabulated data is interpolated linearly (composite
/// trapezoid) and carries a curvature-based quadrature error estimate.
class LipschitzDensity {
 public:
  struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    std::array<double, 4> coef{};  // L(u) = sum_j coef[j] (u - lo)^j on [lo, hi)
  };

  static LipschitzDensity piecewise(std::vector<Segment> segments);
  static LipschitzDensity tabulated(std::span<const double> abscissae,
                                    std::span<const double> values);
  static LipschitzDensity constant(double value, double domain_bound);

  /// Structured text, one segment per line: "lo hi c0 c1 c2 c3".
  static LipschitzDensity load_piecewise(const std::string& path);
  /// Two-column CSV: u, L(u).
  static LipschitzDensity load_table(const std::string& path);

  double operator()(double u) const;
  double integral(double t) const;      // I0(t) = int_0^t L(u) du
  double first_moment(double t) const;  // I1(t) = int_0^t L(u) u du
  double domain_bound() const { return segments_.back().hi; }
  std::optional<double> quadrature_error() const { return quadrature_error_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  explicit LipschitzDensity(std::vector<Segment> segments);
  std::vector<Segment> segments_;
  std::vector<double> prefix_i0_;  // I0 at segment starts
  std::vector<double> prefix_i1_;  // I1 at segment starts
  std::optional<double> quadrature_error_{};
};

/// f(t) = int_0^t L(u)(t - u) du - t with f'(t) = I0(t) - 1.  h1 holds by
/// construction and h2 because L > 0.
MajorantModel generalized_model(const LipschitzDensity& density);

/// As above, but additionally requires t -> t^{1-p} L(t) nondecreasing (the
/// order condition) and marks the model with exponent p.
MajorantModel generalized_model(const LipschitzDensity& density, double p);

/// Sampled check that t -> t^{1-p} L(t) is nondecreasing on (0, nu); ties are
/// allowed.
bool check_condition_h(const LipschitzDensity& density, double p, double nu,
                       int samples = 512);

/// Built-in scalar models:
///   power          f(t) = t^{1+p} - t          (p required, in (0, 1])
///   power_5_3      the p = 2/3 power model
///   exp_quadratic  f(t) = e^{-t} + t^2 - 1     (p = 1, verified by sampling)
MajorantModel example_model(std::string_view name, std::optional<double> p = {});
std::vector<std::string> example_model_names();

}  // namespace mn
