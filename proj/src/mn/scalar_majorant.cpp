#include "mn/scalar_majorant.hpp"

#include <algorithm>
#include <cmath>

#include "mn/error.hpp"

namespace mn {

namespace {

double scan_bound(const MajorantModel& model, const RootFindOptions& opt) {
  return std::min(model.domain_bound, opt.domain_cap);
}

// Log-spaced samples on (hi * 1e-5, hi).  The floor keeps consecutive
// increments of the sampled quantities above evaluation roundoff; deeper
// samples would report spurious ties where f' sits within one ulp of -1 or
// where f(t)/f'(t) - t cancels to noise.
std::vector<double> log_spaced(double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  const double lo = std::max(hi * 1e-5, 1e-300);
  const double top = hi * (1.0 - 1e-12);
  const double ratio = std::log(top / lo);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(lo * std::exp(ratio * s));
  }
  return out;
}

// |n_f(t)|/t - 1 expressed directly through f and f'; negative inside rho.
double contraction_gap(const MajorantModel& model, double t) {
  return model.f(t) / (t * model.fprime(t)) - 2.0;
}

struct RhoResult {
  double rho = 0.0;
  bool crossed = false;    // the bound |n_f(t)| = t is attained at rho
  bool resumes = false;    // contraction intervals exist beyond rho
};

RhoResult compute_rho_impl(const MajorantModel& model, double nu,
                           const RootFindOptions& opt) {
  RhoResult res;
  auto crossing = detail::first_nonnegative(
      [&](double t) { return contraction_gap(model, t); }, nu, opt);
  if (crossing) {
    res.rho = crossing->location;
    res.crossed = true;
    res.resumes = crossing->negative_after;
  } else {
    res.rho = nu;
  }
  return res;
}

}  // namespace

HypothesisReport verify_hypotheses(const MajorantModel& model, int samples) {
  if (samples < 2) fail(ErrorCode::invalid_argument, "need at least 2 samples");
  HypothesisReport rep;
  rep.f_at_zero = model.f(0.0);
  rep.fprime_at_zero = model.fprime(0.0);
  rep.h1_ok = std::abs(rep.f_at_zero) <= 1e-12 && std::abs(rep.fprime_at_zero + 1.0) <= 1e-12;

  RootFindOptions opt;
  const double hi = scan_bound(model, opt);
  rep.h2_ok = true;
  double prev = rep.fprime_at_zero;
  for (double t : log_spaced(hi, samples)) {
    const double v = model.fprime(t);
    if (!std::isfinite(v) || v <= prev) {
      rep.h2_ok = false;
      break;
    }
    prev = v;
  }

  if (model.rate_exponent) {
    const double p = *model.rate_exponent;
    if (p < 0.0 || p > 1.0) fail(ErrorCode::model, "rate exponent must lie in [0, 1]");
    bool ok = rep.h1_ok && rep.h2_ok;
    if (ok) {
      const double nu = compute_nu(model, opt);
      double prev_phi = -std::numeric_limits<double>::infinity();
      for (double t : log_spaced(nu, samples)) {
        const double phi =
            (model.f(t) / model.fprime(t) - t) / std::pow(t, p + 1.0);
        if (!std::isfinite(phi) || phi <= prev_phi) {
          ok = false;
          break;
        }
        prev_phi = phi;
      }
    }
    rep.h3_ok = ok;
  }
  return rep;
}

double newton_scalar_map(const MajorantModel& model, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    fail(ErrorCode::domain, "newton_scalar_map: t must be finite and nonnegative");
  if (t >= model.domain_bound)
    fail(ErrorCode::domain, "newton_scalar_map: t outside the model domain");
  const double fp = model.fprime(t);
  if (!(fp < 0.0))
    fail(ErrorCode::domain,
         "newton_scalar_map: f'(t) >= 0 (t beyond nu or broken model)");
  const double value = t - model.f(t) / fp;
  if (!std::isfinite(value)) fail(ErrorCode::numeric, "newton_scalar_map: non-finite value");
  return value;
}

double compute_nu(const MajorantModel& model, const RootFindOptions& opt) {
  if (!(model.fprime(0.0) < 0.0))
    fail(ErrorCode::model, "compute_nu: f'(0) >= 0 violates h1");
  const double hi = scan_bound(model, opt);
  auto crossing =
      detail::first_nonnegative([&](double t) { return model.fprime(t); }, hi, opt);
  if (crossing) return crossing->location;
  // f' stays negative on the whole sampled interval: the supremum is the
  // domain bound itself (truncated to the cap when unbounded).
  return model.domain_bound <= opt.domain_cap ? model.domain_bound : hi;
}

double compute_rho(const MajorantModel& model, double nu, const RootFindOptions& opt) {
  if (!(nu > 0.0) || !std::isfinite(nu))
    fail(ErrorCode::invalid_argument, "compute_rho: nu must be finite and positive");
  return compute_rho_impl(model, nu, opt).rho;
}

double compute_sigma(const MajorantModel& model, double kappa, const RootFindOptions& opt) {
  if (!(kappa > 0.0)) fail(ErrorCode::invalid_argument, "compute_sigma: kappa must be positive");
  const double hi = std::min({kappa, model.domain_bound, opt.domain_cap});
  auto crossing = detail::first_nonnegative([&](double t) { return model.f(t); }, hi, opt);
  if (crossing) return crossing->location;
  return hi;
}

RadiiReport compute_radii(const MajorantModel& model, double kappa, const RootFindOptions& opt) {
  if (!(kappa > 0.0) || std::isnan(kappa))
    fail(ErrorCode::invalid_argument, "compute_radii: kappa must be positive");
  RadiiReport rep;
  rep.kappa = kappa;
  rep.tolerances = opt;
  rep.nu = compute_nu(model, opt);
  rep.domain_truncated =
      model.domain_bound > opt.domain_cap && rep.nu >= opt.domain_cap;
  const auto rho = compute_rho_impl(model, rep.nu, opt);
  rep.rho = rho.rho;
  rep.contraction_resumes = rho.resumes;
  rep.sigma = compute_sigma(model, kappa, opt);
  rep.r = std::min(kappa, rep.rho);
  rep.rho_is_optimal = rho.crossed && rep.rho < kappa;
  return rep;
}

std::size_t ScalarTrace::pre_threshold_count() const {
  std::size_t n = 0;
  while (n < t.size() && t[n] >= atol) ++n;
  return n;
}

ScalarTrace scalar_sequence(const MajorantModel& model, double t0,
                            const ScalarSequenceOptions& opt,
                            std::optional<double> radius_guard) {
  if (!(opt.atol > 0.0)) fail(ErrorCode::invalid_argument, "scalar_sequence: atol must be positive");
  if (opt.max_iters < 0) fail(ErrorCode::invalid_argument, "scalar_sequence: negative max_iters");
  if (!(t0 > 0.0) || !std::isfinite(t0))
    fail(ErrorCode::iteration, "scalar_sequence: t0 must be finite and positive");

  double guard;
  if (radius_guard) {
    guard = *radius_guard;
  } else {
    RootFindOptions ropt;
    guard = compute_rho(model, compute_nu(model, ropt), ropt);
  }
  if (!(t0 < guard))
    fail(ErrorCode::iteration, "scalar_sequence: t0 outside the contraction interval");

  ScalarTrace trace;
  trace.atol = opt.atol;
  trace.t.push_back(t0);
  while (static_cast<int>(trace.t.size()) - 1 < opt.max_iters) {
    const double cur = trace.t.back();
    if (cur < opt.atol) {
      trace.converged = true;
      break;
    }
    const double next = std::abs(newton_scalar_map(model, cur));
    if (!std::isfinite(next)) fail(ErrorCode::numeric, "scalar_sequence: non-finite iterate");
    if (next >= cur)
      fail(ErrorCode::iteration,
           "scalar_sequence: sequence stopped decreasing inside the certified radius");
    trace.t.push_back(next);
    if (next < opt.atol) {
      trace.converged = true;
      break;
    }
  }
  if (trace.t.back() < opt.atol) trace.converged = true;

  const std::size_t n = trace.t.size();
  trace.ratio_linear.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k + 1 < n; ++k)
    trace.ratio_linear.push_back(trace.t[k + 1] / trace.t[k]);
  if (model.rate_exponent) {
    const double p = *model.rate_exponent;
    trace.ratio_order.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t k = 0; k + 1 < n; ++k)
      trace.ratio_order.push_back(trace.t[k + 1] / std::pow(trace.t[k], p + 1.0));
  }
  return trace;
}

double a_priori_bound(double t0, double t1, double p, int k) {
  if (!(t0 > 0.0) || !(t1 > 0.0))
    fail(ErrorCode::invalid_argument, "a_priori_bound: t0, t1 must be positive");
  if (t1 >= t0) fail(ErrorCode::domain, "a_priori_bound: requires t1 < t0");
  if (p < 0.0 || p > 1.0) fail(ErrorCode::invalid_argument, "a_priori_bound: p must lie in [0, 1]");
  if (k < 0) fail(ErrorCode::invalid_argument, "a_priori_bound: k must be nonnegative");
  const double q = t1 / t0;
  const double exponent =
      p == 0.0 ? static_cast<double>(k) : (std::pow(p + 1.0, k) - 1.0) / p;
  return t0 * std::pow(q, exponent);
}

}  // namespace mn
