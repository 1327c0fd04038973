#include "mn/families.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mn/error.hpp"

namespace mn {

namespace {

void validate_holder(const HolderParams& params) {
  if (!(params.K > 0.0) || !std::isfinite(params.K))
    fail(ErrorCode::invalid_argument, "holder: K must be finite and positive");
  if (!(params.p > 0.0) || params.p > 1.0)
    fail(ErrorCode::invalid_argument, "holder: p must lie in (0, 1]");
}

// Antiderivatives over one polynomial segment, in the shifted variable
// s = u - lo:  int c_j s^j du  and  int c_j s^j u du = int c_j (s^{j+1} + lo s^j) du.
double segment_i0(const LipschitzDensity::Segment& seg, double upto) {
  const double s = upto - seg.lo;
  double acc = 0.0;
  double pw = s;
  for (int j = 0; j < 4; ++j) {
    acc += seg.coef[static_cast<std::size_t>(j)] * pw / static_cast<double>(j + 1);
    pw *= s;
  }
  return acc;
}

double segment_i1(const LipschitzDensity::Segment& seg, double upto) {
  const double s = upto - seg.lo;
  double acc = 0.0;
  double pw_lower = s;  // s^{j+1}
  for (int j = 0; j < 4; ++j) {
    const double c = seg.coef[static_cast<std::size_t>(j)];
    const double pw_upper = pw_lower * s;  // s^{j+2}
    acc += c * (pw_upper / static_cast<double>(j + 2) +
                seg.lo * pw_lower / static_cast<double>(j + 1));
    pw_lower = pw_upper;
  }
  return acc;
}

}  // namespace

MajorantModel holder_model(const HolderParams& params) {
  validate_holder(params);
  const double K = params.K;
  const double p = params.p;
  MajorantModel model;
  model.f = [K, p](double t) { return K * std::pow(t, p + 1.0) / (p + 1.0) - t; };
  model.fprime = [K, p](double t) { return K * std::pow(t, p) - 1.0; };
  model.rate_exponent = p;
  std::ostringstream name;
  name << "holder(K=" << K << ",p=" << p << ")";
  model.name = name.str();
  return model;
}

RadiiReport holder_radii(const HolderParams& params, double kappa) {
  validate_holder(params);
  if (!(kappa > 0.0)) fail(ErrorCode::invalid_argument, "holder_radii: kappa must be positive");
  const double K = params.K;
  const double p = params.p;
  RadiiReport rep;
  rep.kappa = kappa;
  rep.nu = std::pow(1.0 / K, 1.0 / p);
  rep.rho = std::pow((p + 1.0) / ((2.0 * p + 1.0) * K), 1.0 / p);
  rep.sigma = std::min(kappa, std::pow((p + 1.0) / K, 1.0 / p));
  rep.r = std::min(kappa, rep.rho);
  rep.rho_is_optimal = rep.rho < kappa;
  rep.tolerances.grid_points = 0;  // closed form, no scan involved
  rep.tolerances.bisect_atol = 0.0;
  return rep;
}

double lipschitz_radius(double lipschitz_constant, double inverse_norm) {
  if (!(lipschitz_constant > 0.0) || !(inverse_norm > 0.0))
    fail(ErrorCode::invalid_argument, "lipschitz_radius: arguments must be positive");
  return 2.0 / (3.0 * lipschitz_constant * inverse_norm);
}

LipschitzDensity::LipschitzDensity(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) fail(ErrorCode::invalid_argument, "density: no segments");
  double prev_hi = 0.0;
  for (const auto& seg : segments_) {
    if (seg.lo != prev_hi)
      fail(ErrorCode::invalid_argument, "density: segments must be contiguous from 0");
    if (!(seg.hi > seg.lo)) fail(ErrorCode::invalid_argument, "density: empty segment");
    prev_hi = seg.hi;
  }
  // Positivity is required of L; sampled, as nothing more is assumed of it.
  // The origin itself is excluded: a density vanishing only at u = 0 (such as
  // L(u) = c u) still yields a strictly increasing f'.
  for (const auto& seg : segments_) {
    for (int i = 0; i <= 16; ++i) {
      const double u = seg.lo + (seg.hi - seg.lo) * static_cast<double>(i) / 16.0;
      if (u == 0.0) continue;
      double acc = 0.0, pw = 1.0;
      for (int j = 0; j < 4; ++j) {
        acc += seg.coef[static_cast<std::size_t>(j)] * pw;
        pw *= (u - seg.lo);
      }
      if (!(acc > 0.0))
        fail(ErrorCode::invalid_argument, "density: L must be positive on its domain");
    }
  }
  prefix_i0_.resize(segments_.size() + 1, 0.0);
  prefix_i1_.resize(segments_.size() + 1, 0.0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    prefix_i0_[i + 1] = prefix_i0_[i] + segment_i0(segments_[i], segments_[i].hi);
    prefix_i1_[i + 1] = prefix_i1_[i] + segment_i1(segments_[i], segments_[i].hi);
  }
}

LipschitzDensity LipschitzDensity::piecewise(std::vector<Segment> segments) {
  return LipschitzDensity(std::move(segments));
}

LipschitzDensity LipschitzDensity::tabulated(std::span<const double> abscissae,
                                             std::span<const double> values) {
  if (abscissae.size() != values.size())
    fail(ErrorCode::invalid_argument, "tabulated density: mismatched column lengths");
  if (abscissae.size() < 2)
    fail(ErrorCode::invalid_argument, "tabulated density: need at least 2 samples");
  if (abscissae[0] != 0.0)
    fail(ErrorCode::invalid_argument, "tabulated density: abscissae must start at 0");
  std::vector<Segment> segments;
  segments.reserve(abscissae.size() - 1);
  for (std::size_t i = 0; i + 1 < abscissae.size(); ++i) {
    if (!(abscissae[i + 1] > abscissae[i]))
      fail(ErrorCode::invalid_argument, "tabulated density: abscissae must increase");
    Segment seg;
    seg.lo = abscissae[i];
    seg.hi = abscissae[i + 1];
    seg.coef[0] = values[i];
    seg.coef[1] = (values[i + 1] - values[i]) / (seg.hi - seg.lo);
    segments.push_back(seg);
  }
  LipschitzDensity density(std::move(segments));
  // Trapezoid error estimate from slope changes: sum h_i^2 |d_i - d_{i-1}| / 12.
  double est = 0.0;
  const auto& segs = density.segments_;
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const double h = segs[i].hi - segs[i].lo;
    est += h * h * std::abs(segs[i].coef[1] - segs[i - 1].coef[1]) / 12.0;
  }
  density.quadrature_error_ = est;
  return density;
}

LipschitzDensity LipschitzDensity::constant(double value, double domain_bound) {
  Segment seg;
  seg.lo = 0.0;
  seg.hi = domain_bound;
  seg.coef[0] = value;
  return LipschitzDensity({seg});
}

LipschitzDensity LipschitzDensity::load_piecewise(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open density file: " + path);
  std::vector<Segment> segments;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    Segment seg;
    if (!(row >> seg.lo >> seg.hi >> seg.coef[0] >> seg.coef[1] >> seg.coef[2] >> seg.coef[3]))
      fail(ErrorCode::io, "malformed segment line in " + path + ": " + line);
    segments.push_back(seg);
  }
  if (segments.empty()) fail(ErrorCode::io, "no segments in " + path);
  return piecewise(std::move(segments));
}

LipschitzDensity LipschitzDensity::load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open density table: " + path);
  std::vector<double> u, v;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b)) {
      if (u.empty()) continue;  // tolerate one header row
      fail(ErrorCode::io, "malformed table line in " + path + ": " + line);
    }
    u.push_back(a);
    v.push_back(b);
  }
  return tabulated(u, v);
}

double LipschitzDensity::operator()(double u) const {
  if (u < 0.0 || u >= domain_bound())
    fail(ErrorCode::domain, "density: evaluation outside [0, R)");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), u,
                             [](double x, const Segment& s) { return x < s.hi; });
  const Segment& seg = it == segments_.end() ? segments_.back() : *it;
  double acc = 0.0, pw = 1.0;
  for (int j = 0; j < 4; ++j) {
    acc += seg.coef[static_cast<std::size_t>(j)] * pw;
    pw *= (u - seg.lo);
  }
  return acc;
}

double LipschitzDensity::integral(double t) const {
  if (t < 0.0 || t > domain_bound())
    fail(ErrorCode::domain, "density: integral endpoint outside [0, R]");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const Segment& s) { return x < s.hi; });
  const std::size_t i =
      it == segments_.end() ? segments_.size() - 1
                            : static_cast<std::size_t>(it - segments_.begin());
  return prefix_i0_[i] + segment_i0(segments_[i], t);
}

double LipschitzDensity::first_moment(double t) const {
  if (t < 0.0 || t > domain_bound())
    fail(ErrorCode::domain, "density: integral endpoint outside [0, R]");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const Segment& s) { return x < s.hi; });
  const std::size_t i =
      it == segments_.end() ? segments_.size() - 1
                            : static_cast<std::size_t>(it - segments_.begin());
  return prefix_i1_[i] + segment_i1(segments_[i], t);
}

MajorantModel generalized_model(const LipschitzDensity& density) {
  auto shared = std::make_shared<LipschitzDensity>(density);
  MajorantModel model;
  model.f = [shared](double t) {
    return t * shared->integral(t) - shared->first_moment(t) - t;
  };
  model.fprime = [shared](double t) { return shared->integral(t) - 1.0; };
  model.domain_bound = shared->domain_bound();
  model.name = "generalized";
  return model;
}

MajorantModel generalized_model(const LipschitzDensity& density, double p) {
  MajorantModel model = generalized_model(density);
  const double nu = compute_nu(model);
  if (!check_condition_h(density, p, nu))
    fail(ErrorCode::model,
         "generalized_model: t^{1-p} L(t) is not nondecreasing; order diagnostics refused");
  model.rate_exponent = p;
  return model;
}

bool check_condition_h(const LipschitzDensity& density, double p, double nu,
                       int samples) {
  if (p < 0.0 || p > 1.0)
    fail(ErrorCode::invalid_argument, "check_condition_h: p must lie in [0, 1]");
  if (!(nu > 0.0)) fail(ErrorCode::invalid_argument, "check_condition_h: nu must be positive");
  const double hi = std::min(nu, density.domain_bound()) * (1.0 - 1e-12);
  const double lo = std::max(hi * 1e-12, 1e-300);
  const double span = std::log(hi / lo);
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double t = lo * std::exp(span * s);
    const double g = std::pow(t, 1.0 - p) * density(t);
    if (!std::isfinite(g) || g < prev) return false;
    prev = g;
  }
  return true;
}

MajorantModel example_model(std::string_view name, std::optional<double> p) {
  if (name == "power") {
    if (!p) fail(ErrorCode::invalid_argument, "example power: exponent p is required");
    if (!(*p > 0.0) || *p > 1.0)
      fail(ErrorCode::invalid_argument, "example power: p must lie in (0, 1]");
    const double pe = *p;
    MajorantModel model;
    model.f = [pe](double t) { return std::pow(t, 1.0 + pe) - t; };
    model.fprime = [pe](double t) { return (1.0 + pe) * std::pow(t, pe) - 1.0; };
    model.rate_exponent = pe;
    model.name = "power(p=" + std::to_string(pe) + ")";
    return model;
  }
  if (name == "power_5_3") {
    const double pe = 2.0 / 3.0;
    if (p && *p != pe)
      fail(ErrorCode::invalid_argument, "example power_5_3: exponent is fixed at 2/3");
    MajorantModel model = example_model("power", pe);
    model.name = "power_5_3";
    return model;
  }
  if (name == "exp_quadratic") {
    MajorantModel model;
    // expm1 keeps f relatively accurate near 0, where e^{-t} - 1 cancels.
    model.f = [](double t) { return std::expm1(-t) + t * t; };
    model.fprime = [](double t) { return 2.0 * t - std::exp(-t); };
    model.name = "exp_quadratic";
    // The order exponent is a candidate only; it is kept iff sampling confirms
    // the order condition, and order diagnostics are refused otherwise.
    const double candidate = p.value_or(1.0);
    model.rate_exponent = candidate;
    const HypothesisReport rep = verify_hypotheses(model);
    if (!rep.h3_ok.value_or(false)) {
      if (p)
        fail(ErrorCode::model,
             "example exp_quadratic: sampled order condition fails for requested p");
      model.rate_exponent.reset();
    }
    return model;
  }
  fail(ErrorCode::unknown_name, "unknown example model: " + std::string(name));
}

std::vector<std::string> example_model_names() {
  return {"power", "power_5_3", "exp_quadratic"};
}

}  // namespace mn
