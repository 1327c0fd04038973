#pragma once

#include <functional>
#include <optional>

namespace mn {

/// Knobs shared by every radius computation: bracket by uniform grid scan,
/// then plain bisection.  Bisection is used instead of anything faster
/// because the scanned functions are only assumed continuous and monotone
/// in the relevant direction.
struct RootFindOptions {
  int grid_points = 4096;       // uniform scan resolution for bracketing
  double bisect_atol = 1e-12;   // absolute width at which bisection stops
  int max_bisect_steps = 200;
  double domain_cap = 1e8;      // where scans stop when the domain is unbounded
  int hypothesis_samples = 512; // log-spaced samples for monotonicity checks
};

namespace detail {

struct Crossing {
  double location = 0.0;   // refined first point where g reaches >= 0
  bool negative_after = false;  // g dips < 0 again beyond the crossing
};

// g is continuous on (0, hi) with g -> negative values as t -> 0+.  Scans a
// uniform grid for the first point with g >= 0 and refines it by bisection.
// Returns nullopt when g stays negative on the whole sampled interval.
// Non-finite NaN evaluations abort the scan.
std::optional<Crossing> first_nonnegative(const std::function<double(double)>& g,
                                          double hi, const RootFindOptions& opt);

}  // namespace detail
}  // namespace mn
