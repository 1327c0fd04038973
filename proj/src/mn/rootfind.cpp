#include "mn/rootfind.hpp"

#include <cmath>

#include "mn/error.hpp"

namespace mn::detail {

namespace {

double checked_eval(const std::function<double(double)>& g, double t) {
  const double v = g(t);
  if (std::isnan(v)) fail(ErrorCode::numeric, "non-finite value during bracketing scan");
  return v;
}

}  // namespace

std::optional<Crossing> first_nonnegative(const std::function<double(double)>& g,
                                          double hi, const RootFindOptions& opt) {
  if (!(hi > 0.0) || !std::isfinite(hi))
    fail(ErrorCode::invalid_argument, "scan interval must have finite positive length");
  const int n = opt.grid_points;

  // Interior grid: the integrand may be undefined at the right endpoint.
  double lo_bracket = 0.0;
  double hi_bracket = 0.0;
  int found = -1;
  for (int i = 1; i <= n; ++i) {
    const double t = hi * static_cast<double>(i) / static_cast<double>(n + 1);
    if (checked_eval(g, t) >= 0.0) {
      found = i;
      lo_bracket = hi * static_cast<double>(i - 1) / static_cast<double>(n + 1);
      hi_bracket = t;
      break;
    }
  }
  if (found < 0) {
    // The last cell before hi is unsampled; probe just inside the endpoint.
    const double t = hi * (1.0 - 1e-9);
    if (checked_eval(g, t) >= 0.0) {
      lo_bracket = hi * static_cast<double>(n) / static_cast<double>(n + 1);
      hi_bracket = t;
      found = n + 1;
    } else {
      return std::nullopt;
    }
  }

  // The left end must evaluate negative before bisection can start.  When the
  // crossing sits in the first grid cell, walk the endpoint down geometrically
  // (g is negative near 0 by assumption).
  if (lo_bracket > 0.0 && checked_eval(g, lo_bracket) >= 0.0) {
    fail(ErrorCode::numeric, "bracketing scan produced an invalid bracket");
  }
  if (lo_bracket == 0.0) {
    double a = hi_bracket / 2.0;
    int shrink = 0;
    while (a > 0.0 && checked_eval(g, a) >= 0.0) {
      a /= 2.0;
      if (++shrink > 1100) fail(ErrorCode::numeric, "no sign change found near zero");
    }
    lo_bracket = a;
  }

  double a = lo_bracket, b = hi_bracket;
  for (int step = 0; step < opt.max_bisect_steps && (b - a) > opt.bisect_atol; ++step) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;  // interval no longer splittable
    if (checked_eval(g, m) >= 0.0)
      b = m;
    else
      a = m;
  }

  Crossing crossing;
  crossing.location = 0.5 * (a + b);

  // Rescan beyond the crossing: a non-monotone g may dip negative again.
  for (int i = found + 1; i <= n; ++i) {
    const double t = hi * static_cast<double>(i) / static_cast<double>(n + 1);
    if (checked_eval(g, t) < 0.0) {
      crossing.negative_after = true;
      break;
    }
  }
  return crossing;
}

}  // namespace mn::detail
