#include "majorant_newton.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "mn/certify.hpp"
#include "mn/error.hpp"
#include "mn/families.hpp"
#include "mn/newton.hpp"
#include "mn/registry.hpp"
#include "mn/scalar_majorant.hpp"
#include "mn/serialize.hpp"

struct mn_model {
  mn::MajorantModel impl;
};
struct mn_density {
  mn::LipschitzDensity impl;
};
struct mn_problem {
  mn::Problem impl;
};
struct mn_scalar_trace {
  mn::ScalarTrace impl;
};
struct mn_newton_trace {
  mn::NewtonTrace impl;
};
struct mn_report {
  mn::CertificationReport impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

int map_code(mn::ErrorCode code) {
  switch (code) {
    case mn::ErrorCode::invalid_argument: return MN_ERR_INVALID_ARGUMENT;
    case mn::ErrorCode::domain: return MN_ERR_DOMAIN;
    case mn::ErrorCode::model: return MN_ERR_MODEL;
    case mn::ErrorCode::numeric: return MN_ERR_NUMERIC;
    case mn::ErrorCode::iteration: return MN_ERR_ITERATION;
    case mn::ErrorCode::singular: return MN_ERR_SINGULAR;
    case mn::ErrorCode::unknown_name: return MN_ERR_UNKNOWN_NAME;
    case mn::ErrorCode::io: return MN_ERR_IO;
  }
  return MN_ERR_INTERNAL;
}

template <class Fn>
int guarded(Fn&& fn) noexcept {
  try {
    fn();
    return MN_OK;
  } catch (const mn::Error& e) {
    set_error(e.what());
    return map_code(e.code());
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MN_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MN_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return MN_ERR_INTERNAL;
  }
}

int require(bool condition, const char* message) {
  if (condition) return MN_OK;
  set_error(message);
  return MN_ERR_INVALID_ARGUMENT;
}

mn::Vector to_vector(const double* data, size_t n) {
  mn::Vector v(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = data[i];
  return v;
}

}  // namespace

extern "C" {

const char* mn_version(void) { return "1.0.0"; }

const char* mn_last_error(void) { return g_last_error.c_str(); }

void mn_string_free(char* s) { std::free(s); }

/* ----------------------------- models ----------------------------- */

int mn_model_holder(double K, double p, mn_model** out) {
  if (int rc = require(out != nullptr, "out must not be null")) return rc;
  return guarded([&] { *out = new mn_model{mn::holder_model({K, p})}; });
}

int mn_model_example(const char* name, double p, mn_model** out) {
  if (int rc = require(out != nullptr && name != nullptr, "name/out must not be null"))
    return rc;
  return guarded([&] {
    std::optional<double> exponent;
    if (!std::isnan(p)) exponent = p;
    *out = new mn_model{mn::example_model(name, exponent)};
  });
}

int mn_model_custom(mn_scalar_fn f, mn_scalar_fn fprime, void* user,
                    double domain_bound, double p, mn_model** out) {
  if (int rc = require(out != nullptr && f != nullptr && fprime != nullptr,
                       "callbacks/out must not be null"))
    return rc;
  return guarded([&] {
    if (!(domain_bound > 0.0))
      mn::fail(mn::ErrorCode::invalid_argument, "domain_bound must be positive");
    mn::MajorantModel model;
    model.f = [f, user](double t) { return f(t, user); };
    model.fprime = [fprime, user](double t) { return fprime(t, user); };
    model.domain_bound = domain_bound;
    if (!std::isnan(p)) {
      if (p < 0.0 || p > 1.0)
        mn::fail(mn::ErrorCode::invalid_argument, "p must lie in [0, 1]");
      model.rate_exponent = p;
    }
    *out = new mn_model{std::move(model)};
  });
}

int mn_model_generalized(const mn_density* density, double p, mn_model** out) {
  if (int rc = require(out != nullptr && density != nullptr, "density/out must not be null"))
    return rc;
  return guarded([&] {
    *out = new mn_model{std::isnan(p) ? mn::generalized_model(density->impl)
                                      : mn::generalized_model(density->impl, p)};
  });
}

void mn_model_free(mn_model* model) { delete model; }

int mn_model_eval_f(const mn_model* model, double t, double* out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  return guarded([&] { *out = model->impl.f(t); });
}

int mn_model_eval_fprime(const mn_model* model, double t, double* out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  return guarded([&] { *out = model->impl.fprime(t); });
}

int mn_model_newton_map(const mn_model* model, double t, double* out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  return guarded([&] { *out = mn::newton_scalar_map(model->impl, t); });
}

int mn_model_rate_exponent(const mn_model* model, double* out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  *out = model->impl.rate_exponent.value_or(std::numeric_limits<double>::quiet_NaN());
  return MN_OK;
}

int mn_model_domain_bound(const mn_model* model, double* out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  *out = model->impl.domain_bound;
  return MN_OK;
}

int mn_model_verify(const mn_model* model, int samples, int* h1_ok, int* h2_ok,
                    int* h3_ok) {
  if (int rc = require(model != nullptr, "model must not be null")) return rc;
  return guarded([&] {
    const mn::HypothesisReport rep =
        mn::verify_hypotheses(model->impl, samples > 0 ? samples : 512);
    if (h1_ok) *h1_ok = rep.h1_ok ? 1 : 0;
    if (h2_ok) *h2_ok = rep.h2_ok ? 1 : 0;
    if (h3_ok) *h3_ok = rep.h3_ok ? (*rep.h3_ok ? 1 : 0) : -1;
  });
}

/* ---------------------------- densities --------------------------- */

int mn_density_piecewise(const double* breakpoints, const double* coeffs,
                         size_t segments, mn_density** out) {
  if (int rc = require(out != nullptr && breakpoints != nullptr && coeffs != nullptr,
                       "arguments must not be null"))
    return rc;
  return guarded([&] {
    std::vector<mn::LipschitzDensity::Segment> segs(segments);
    for (size_t i = 0; i < segments; ++i) {
      segs[i].lo = breakpoints[i];
      segs[i].hi = breakpoints[i + 1];
      for (size_t j = 0; j < 4; ++j) segs[i].coef[j] = coeffs[4 * i + j];
    }
    *out = new mn_density{mn::LipschitzDensity::piecewise(std::move(segs))};
  });
}

int mn_density_tabulated(const double* u, const double* values, size_t n,
                         mn_density** out) {
  if (int rc = require(out != nullptr && u != nullptr && values != nullptr,
                       "arguments must not be null"))
    return rc;
  return guarded([&] {
    *out = new mn_density{
        mn::LipschitzDensity::tabulated({u, n}, {values, n})};
  });
}

int mn_density_from_file(const char* path, const char* format, mn_density** out) {
  if (int rc = require(out != nullptr && path != nullptr && format != nullptr,
                       "arguments must not be null"))
    return rc;
  return guarded([&] {
    const std::string fmt(format);
    if (fmt == "piecewise")
      *out = new mn_density{mn::LipschitzDensity::load_piecewise(path)};
    else if (fmt == "table")
      *out = new mn_density{mn::LipschitzDensity::load_table(path)};
    else
      mn::fail(mn::ErrorCode::invalid_argument, "format must be 'piecewise' or 'table'");
  });
}

void mn_density_free(mn_density* density) { delete density; }

int mn_density_eval(const mn_density* density, double u, double* out) {
  if (int rc = require(density != nullptr && out != nullptr, "density/out must not be null"))
    return rc;
  return guarded([&] { *out = density->impl(u); });
}

int mn_density_integrals(const mn_density* density, double t, double* integral,
                         double* first_moment) {
  if (int rc = require(density != nullptr, "density must not be null")) return rc;
  return guarded([&] {
    if (integral) *integral = density->impl.integral(t);
    if (first_moment) *first_moment = density->impl.first_moment(t);
  });
}

int mn_density_condition_h(const mn_density* density, double p, double nu,
                           int samples, int* ok) {
  if (int rc = require(density != nullptr && ok != nullptr, "density/ok must not be null"))
    return rc;
  return guarded([&] {
    *ok = mn::check_condition_h(density->impl, p, nu, samples > 0 ? samples : 512) ? 1 : 0;
  });
}

int mn_density_quadrature_error(const mn_density* density, double* out) {
  if (int rc = require(density != nullptr && out != nullptr, "density/out must not be null"))
    return rc;
  *out = density->impl.quadrature_error().value_or(
      std::numeric_limits<double>::quiet_NaN());
  return MN_OK;
}

/* ------------------------------ radii ----------------------------- */

namespace {

void fill_radii(const mn::RadiiReport& rep, mn_radii* out) {
  out->kappa = rep.kappa;
  out->nu = rep.nu;
  out->rho = rep.rho;
  out->sigma = rep.sigma;
  out->r = rep.r;
  out->rho_is_optimal = rep.rho_is_optimal ? 1 : 0;
  out->domain_truncated = rep.domain_truncated ? 1 : 0;
  out->contraction_resumes = rep.contraction_resumes ? 1 : 0;
  out->bisect_atol = rep.tolerances.bisect_atol;
  out->grid_points = rep.tolerances.grid_points;
}

}  // namespace

int mn_compute_radii(const mn_model* model, double kappa, mn_radii* out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  return guarded([&] { fill_radii(mn::compute_radii(model->impl, kappa), out); });
}

int mn_holder_radii(double K, double p, double kappa, mn_radii* out) {
  if (int rc = require(out != nullptr, "out must not be null")) return rc;
  return guarded([&] { fill_radii(mn::holder_radii({K, p}, kappa), out); });
}

int mn_lipschitz_radius(double lipschitz_constant, double inverse_norm, double* out) {
  if (int rc = require(out != nullptr, "out must not be null")) return rc;
  return guarded([&] { *out = mn::lipschitz_radius(lipschitz_constant, inverse_norm); });
}

/* ----------------------- scalar sequences ------------------------- */

int mn_scalar_sequence(const mn_model* model, double t0, int max_iters, double atol,
                       mn_scalar_trace** out) {
  if (int rc = require(model != nullptr && out != nullptr, "model/out must not be null"))
    return rc;
  return guarded([&] {
    mn::ScalarSequenceOptions opt;
    opt.max_iters = max_iters;
    opt.atol = atol;
    *out = new mn_scalar_trace{mn::scalar_sequence(model->impl, t0, opt)};
  });
}

void mn_scalar_trace_free(mn_scalar_trace* trace) { delete trace; }

size_t mn_scalar_trace_len(const mn_scalar_trace* trace) {
  return trace ? trace->impl.t.size() : 0;
}

int mn_scalar_trace_value(const mn_scalar_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (int rc = require(k < trace->impl.t.size(), "index out of range")) return rc;
  *out = trace->impl.t[k];
  return MN_OK;
}

int mn_scalar_trace_ratio_linear(const mn_scalar_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (int rc = require(k < trace->impl.ratio_linear.size(), "index out of range")) return rc;
  *out = trace->impl.ratio_linear[k];
  return MN_OK;
}

int mn_scalar_trace_ratio_order(const mn_scalar_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (trace->impl.ratio_order.empty()) {
    set_error("model declared no order exponent");
    return MN_ERR_DOMAIN;
  }
  if (int rc = require(k < trace->impl.ratio_order.size(), "index out of range")) return rc;
  *out = trace->impl.ratio_order[k];
  return MN_OK;
}

int mn_scalar_trace_converged(const mn_scalar_trace* trace) {
  return trace && trace->impl.converged ? 1 : 0;
}

int mn_apriori_bound(double t0, double t1, double p, int k, double* out) {
  if (int rc = require(out != nullptr, "out must not be null")) return rc;
  return guarded([&] { *out = mn::a_priori_bound(t0, t1, p, k); });
}

/* --------------------------- problems ----------------------------- */

int mn_problem_registry(const char* id, double kappa, mn_problem** out) {
  if (int rc = require(out != nullptr && id != nullptr, "id/out must not be null")) return rc;
  return guarded([&] {
    std::optional<double> k;
    if (!std::isnan(kappa)) k = kappa;
    *out = new mn_problem{mn::registry_problem(id, k)};
  });
}

int mn_problem_registry_model(const char* id, mn_model** out) {
  if (int rc = require(out != nullptr && id != nullptr, "id/out must not be null")) return rc;
  return guarded([&] { *out = new mn_model{mn::registry_matched_model(id)}; });
}

size_t mn_registry_count(void) { return mn::registry_entries().size(); }

int mn_registry_id(size_t index, char* buf, size_t buflen) {
  if (int rc = require(buf != nullptr && buflen > 0, "buffer must not be empty")) return rc;
  const auto& entries = mn::registry_entries();
  if (int rc = require(index < entries.size(), "index out of range")) return rc;
  std::strncpy(buf, entries[index].id.c_str(), buflen - 1);
  buf[buflen - 1] = '\0';
  return MN_OK;
}

int mn_problem_worst_case(const mn_model* model, mn_problem** out) {
  if (int rc = require(out != nullptr && model != nullptr, "model/out must not be null"))
    return rc;
  return guarded([&] { *out = new mn_problem{mn::worst_case_instance(model->impl)}; });
}

int mn_problem_custom(int dim, mn_vector_fn F, mn_jacobian_fn jacobian, void* user,
                      const double* x_star, double kappa, mn_problem** out) {
  if (int rc = require(out != nullptr && F != nullptr, "F/out must not be null")) return rc;
  return guarded([&] {
    auto evaluate = [F, user, dim](const mn::Vector& x) {
      mn::Vector result(dim);
      if (F(x.data(), result.data(), user) != 0)
        mn::fail(mn::ErrorCode::numeric, "user evaluator reported failure");
      return result;
    };
    std::function<mn::Matrix(const mn::Vector&)> jac;
    if (jacobian) {
      jac = [jacobian, user, dim](const mn::Vector& x) {
        std::vector<double> buffer(static_cast<size_t>(dim) * dim);
        if (jacobian(x.data(), buffer.data(), user) != 0)
          mn::fail(mn::ErrorCode::numeric, "user jacobian reported failure");
        mn::Matrix result(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            result(i, j) = buffer[static_cast<size_t>(i) * dim + j];
        return result;
      };
    }
    std::optional<mn::Vector> root;
    if (x_star) root = to_vector(x_star, static_cast<size_t>(dim));
    *out = new mn_problem{mn::make_problem(dim, evaluate, jac, root, kappa)};
  });
}

void mn_problem_free(mn_problem* problem) { delete problem; }

int mn_problem_dim(const mn_problem* problem) { return problem ? problem->impl.dim : 0; }

int mn_problem_kappa(const mn_problem* problem, double* out) {
  if (int rc = require(problem != nullptr && out != nullptr, "problem/out must not be null"))
    return rc;
  *out = problem->impl.kappa;
  return MN_OK;
}

int mn_problem_has_root(const mn_problem* problem) {
  return problem && problem->impl.root ? 1 : 0;
}

int mn_problem_root(const mn_problem* problem, double* out) {
  if (int rc = require(problem != nullptr && out != nullptr, "problem/out must not be null"))
    return rc;
  if (!problem->impl.root) {
    set_error("problem has no declared root");
    return MN_ERR_DOMAIN;
  }
  for (int i = 0; i < problem->impl.dim; ++i) out[i] = (*problem->impl.root)(i);
  return MN_OK;
}

/* ----------------------------- solver ------------------------------ */

int mn_newton_solve(const mn_problem* problem, const double* x0, size_t dim,
                    int max_iters, double step_atol, double residual_atol,
                    mn_newton_trace** out) {
  if (int rc = require(problem != nullptr && x0 != nullptr && out != nullptr,
                       "problem/x0/out must not be null"))
    return rc;
  if (int rc = require(dim == static_cast<size_t>(problem->impl.dim),
                       "x0 dimension mismatch"))
    return rc;
  return guarded([&] {
    mn::SolveOptions opt;
    opt.max_iters = max_iters;
    opt.step_atol = step_atol;
    opt.residual_atol = residual_atol;
    *out = new mn_newton_trace{
        mn::newton_solve(problem->impl, to_vector(x0, dim), opt)};
  });
}

void mn_newton_trace_free(mn_newton_trace* trace) { delete trace; }

size_t mn_newton_trace_len(const mn_newton_trace* trace) {
  return trace ? trace->impl.iterates.size() : 0;
}

int mn_newton_trace_status(const mn_newton_trace* trace) {
  if (!trace) return MN_SOLVE_NONFINITE;
  switch (trace->impl.status) {
    case mn::SolveStatus::converged: return MN_SOLVE_CONVERGED;
    case mn::SolveStatus::max_iters: return MN_SOLVE_MAX_ITERS;
    case mn::SolveStatus::singular_jacobian: return MN_SOLVE_SINGULAR_JACOBIAN;
    case mn::SolveStatus::left_domain: return MN_SOLVE_LEFT_DOMAIN;
    case mn::SolveStatus::nonfinite: return MN_SOLVE_NONFINITE;
  }
  return MN_SOLVE_NONFINITE;
}

int mn_newton_trace_iterate(const mn_newton_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (int rc = require(k < trace->impl.iterates.size(), "index out of range")) return rc;
  const mn::Vector& x = trace->impl.iterates[k];
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x(i);
  return MN_OK;
}

int mn_newton_trace_residual(const mn_newton_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (int rc = require(k < trace->impl.residual_norms.size(), "index out of range")) return rc;
  *out = trace->impl.residual_norms[k];
  return MN_OK;
}

int mn_newton_trace_step(const mn_newton_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (int rc = require(k >= 1 && k - 1 < trace->impl.step_norms.size(), "index out of range"))
    return rc;
  *out = trace->impl.step_norms[k - 1];
  return MN_OK;
}

int mn_newton_trace_error(const mn_newton_trace* trace, size_t k, double* out) {
  if (int rc = require(trace != nullptr && out != nullptr, "trace/out must not be null"))
    return rc;
  if (trace->impl.error_norms.empty()) {
    set_error("trace has no error norms (problem root unknown)");
    return MN_ERR_DOMAIN;
  }
  if (int rc = require(k < trace->impl.error_norms.size(), "index out of range")) return rc;
  *out = trace->impl.error_norms[k];
  return MN_OK;
}

int mn_newton_trace_two_cycle(const mn_newton_trace* trace, double tol) {
  return trace && mn::is_two_cycle(trace->impl, tol) ? 1 : 0;
}

/* ------------------------- matrix utilities ----------------------- */

int mn_operator_norm(const double* a, int rows, int cols, double* out) {
  if (int rc = require(a != nullptr && out != nullptr, "a/out must not be null")) return rc;
  if (int rc = require(rows > 0 && cols > 0, "dimensions must be positive")) return rc;
  return guarded([&] {
    mn::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        m(i, j) = a[static_cast<size_t>(i) * cols + j];
    *out = mn::operator_norm(m);
  });
}

int mn_banach_inverse_bound(const double* b, int n, double* out) {
  if (int rc = require(b != nullptr && out != nullptr, "b/out must not be null")) return rc;
  if (int rc = require(n > 0, "dimension must be positive")) return rc;
  return guarded([&] {
    mn::Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = b[static_cast<size_t>(i) * n + j];
    *out = mn::banach_inverse_bound(m);
  });
}

/* --------------------------- certification ------------------------ */

void mn_certify_options_default(mn_certify_options* opt) {
  if (!opt) return;
  opt->hypothesis_samples = 200;
  opt->tau_samples = 21;
  opt->uniqueness_probes = 0;
  opt->seed = 20240501ULL;
}

int mn_certify(const mn_problem* problem, const mn_model* model, const double* x0,
               size_t dim, int max_iters, double step_atol, double residual_atol,
               const mn_certify_options* opt, mn_report** out) {
  if (int rc = require(problem != nullptr && model != nullptr && x0 != nullptr &&
                           out != nullptr,
                       "problem/model/x0/out must not be null"))
    return rc;
  if (int rc = require(dim == static_cast<size_t>(problem->impl.dim),
                       "x0 dimension mismatch"))
    return rc;
  return guarded([&] {
    mn::SolveOptions sopt;
    sopt.max_iters = max_iters;
    sopt.step_atol = step_atol;
    sopt.residual_atol = residual_atol;
    const mn::NewtonTrace trace =
        mn::newton_solve(problem->impl, to_vector(x0, dim), sopt);
    mn::CertifyOptions copt;
    if (opt) {
      copt.hypothesis_samples = opt->hypothesis_samples;
      copt.tau_samples = opt->tau_samples;
      copt.uniqueness_probes = opt->uniqueness_probes;
      copt.seed = opt->seed;
    }
    *out = new mn_report{mn::certify(problem->impl, model->impl, trace, copt)};
  });
}

void mn_report_free(mn_report* report) { delete report; }

int mn_report_passed(const mn_report* report) {
  return report && report->impl.passed() ? 1 : 0;
}

size_t mn_report_violation_count(const mn_report* report) {
  return report ? report->impl.all_violations().size() : 0;
}

int mn_report_to_json(const mn_report* report, char** out) {
  if (int rc = require(report != nullptr && out != nullptr, "report/out must not be null"))
    return rc;
  return guarded([&] {
    const std::string text = mn::to_json(report->impl).dump(2);
    char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buffer) mn::fail(mn::ErrorCode::numeric, "allocation failure");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

}  // extern "C"
