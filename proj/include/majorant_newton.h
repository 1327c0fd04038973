/*
 * majorant_newton — certified local convergence radii and error bounds for
 * Newton's method on finite-dimensional nonlinear systems.
 *
 * The library pairs a nonlinear map F (with Jacobian) with a scalar model
 * (f, f') whose derivative differences bound the variation of the Jacobian
 * around a root.  From the scalar model it computes:
 *
 *   nu     radius on which f' stays negative,
 *   rho    radius on which the scalar Newton map contracts (|n_f(t)| < t),
 *   sigma  radius of the ball in which the root is unique,
 *   r      min(kappa, rho), the certified convergence radius,
 *
 * together with the scalar comparison sequence t_{k+1} = |t_k - f(t_k)/f'(t_k)|
 * and a-priori error bounds.  The certification entry point replays every
 * bound against an actual Newton run and reports margins and violations.
 *
 * All functions return MN_OK (0) on success or an mn_error code; call
 * mn_last_error() for a thread-local description of the most recent failure.
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free function.
 */

#ifndef MAJORANT_NEWTON_H
#define MAJORANT_NEWTON_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MN_BUILD_SHARED)
#    define MN_API __declspec(dllexport)
#  else
#    define MN_API __declspec(dllimport)
#  endif
#else
#  define MN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------ */
/* Error handling                                                      */

enum mn_error {
  MN_OK = 0,
  MN_ERR_INVALID_ARGUMENT = 1,
  MN_ERR_DOMAIN = 2,      /* argument outside an operation's mathematical domain */
  MN_ERR_MODEL = 3,       /* scalar model fails a hypothesis */
  MN_ERR_NUMERIC = 4,     /* non-finite values or a numeric routine failed */
  MN_ERR_ITERATION = 5,   /* generated sequence left its certified interval */
  MN_ERR_SINGULAR = 6,    /* singular matrix / invertibility precondition */
  MN_ERR_UNKNOWN_NAME = 7,
  MN_ERR_IO = 8,
  MN_ERR_INTERNAL = 9
};

MN_API const char* mn_version(void);
/* Thread-local message for the last failing call in this thread. */
MN_API const char* mn_last_error(void);
MN_API void mn_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Scalar models                                                       */

typedef struct mn_model mn_model;
typedef struct mn_density mn_density;

typedef double (*mn_scalar_fn)(double t, void* user);

/* f(t) = K t^{p+1}/(p+1) - t for a Jacobian whose variation is bounded by
 * K (1 - tau^p) ||x - x*||^p.  Requires K > 0 and 0 < p <= 1. */
MN_API int mn_model_holder(double K, double p, mn_model** out);

/* Built-in models: "power" (pass p in (0,1]), "power_5_3", "exp_quadratic"
 * (pass NAN to accept the default exponent handling). */
MN_API int mn_model_example(const char* name, double p, mn_model** out);

/* Black-box model from callbacks; domain_bound may be INFINITY and p NAN when
 * no order exponent is claimed. */
MN_API int mn_model_custom(mn_scalar_fn f, mn_scalar_fn fprime, void* user,
                           double domain_bound, double p, mn_model** out);

/* f(t) = int_0^t L(u)(t-u) du - t from an integrable density; pass p in [0,1]
 * to request order diagnostics (requires t^{1-p} L(t) nondecreasing) or NAN
 * to skip them. */
MN_API int mn_model_generalized(const mn_density* density, double p, mn_model** out);

MN_API void mn_model_free(mn_model* model);

MN_API int mn_model_eval_f(const mn_model* model, double t, double* out);
MN_API int mn_model_eval_fprime(const mn_model* model, double t, double* out);
/* Newton iteration map n_f(t) = t - f(t)/f'(t); requires f'(t) < 0. */
MN_API int mn_model_newton_map(const mn_model* model, double t, double* out);
/* *out is NAN when the model declares no order exponent. */
MN_API int mn_model_rate_exponent(const mn_model* model, double* out);
MN_API int mn_model_domain_bound(const mn_model* model, double* out);

/* Sampled hypothesis verification; h3_ok is set to -1 when no exponent is
 * declared, else 0/1. */
MN_API int mn_model_verify(const mn_model* model, int samples, int* h1_ok,
                           int* h2_ok, int* h3_ok);

/* ------------------------------------------------------------------ */
/* Lipschitz densities                                                 */

/* breakpoints has length segments + 1 starting at 0; coeffs is row-major
 * segments x 4, giving L(u) = sum_j c_j (u - lo)^j on each piece. */
MN_API int mn_density_piecewise(const double* breakpoints, const double* coeffs,
                                size_t segments, mn_density** out);
/* Linear interpolation through (u_i, L_i); needs at least 2 samples, u_0 = 0. */
MN_API int mn_density_tabulated(const double* u, const double* values, size_t n,
                                mn_density** out);
/* format is "piecewise" (lines "lo hi c0 c1 c2 c3") or "table" (CSV u,L). */
MN_API int mn_density_from_file(const char* path, const char* format,
                                mn_density** out);
MN_API void mn_density_free(mn_density* density);

MN_API int mn_density_eval(const mn_density* density, double u, double* out);
/* integral = int_0^t L, first_moment = int_0^t u L(u) du; either may be NULL. */
MN_API int mn_density_integrals(const mn_density* density, double t,
                                double* integral, double* first_moment);
/* Sampled check that t^{1-p} L(t) is nondecreasing on (0, nu). */
MN_API int mn_density_condition_h(const mn_density* density, double p, double nu,
                                  int samples, int* ok);
/* NAN for exact (piecewise polynomial) densities. */
MN_API int mn_density_quadrature_error(const mn_density* density, double* out);

/* ------------------------------------------------------------------ */
/* Radii                                                               */

typedef struct {
  double kappa;
  double nu;
  double rho;
  double sigma;
  double r;
  int rho_is_optimal;
  int domain_truncated;
  int contraction_resumes;
  double bisect_atol;
  int grid_points;
} mn_radii;

MN_API int mn_compute_radii(const mn_model* model, double kappa, mn_radii* out);
/* Closed forms for the power family. */
MN_API int mn_holder_radii(double K, double p, double kappa, mn_radii* out);
/* 2 / (3 L ||J(x*)^{-1}||). */
MN_API int mn_lipschitz_radius(double lipschitz_constant, double inverse_norm,
                               double* out);

/* ------------------------------------------------------------------ */
/* Scalar comparison sequence                                          */

typedef struct mn_scalar_trace mn_scalar_trace;

MN_API int mn_scalar_sequence(const mn_model* model, double t0, int max_iters,
                              double atol, mn_scalar_trace** out);
MN_API void mn_scalar_trace_free(mn_scalar_trace* trace);
MN_API size_t mn_scalar_trace_len(const mn_scalar_trace* trace);
MN_API int mn_scalar_trace_value(const mn_scalar_trace* trace, size_t k, double* out);
MN_API int mn_scalar_trace_ratio_linear(const mn_scalar_trace* trace, size_t k,
                                        double* out);
/* Fails with MN_ERR_DOMAIN when the model declared no exponent. */
MN_API int mn_scalar_trace_ratio_order(const mn_scalar_trace* trace, size_t k,
                                       double* out);
MN_API int mn_scalar_trace_converged(const mn_scalar_trace* trace);

/* t0 (t1/t0)^k for p = 0, else t0 (t1/t0)^{[(p+1)^k - 1]/p}; needs t1 < t0. */
MN_API int mn_apriori_bound(double t0, double t1, double p, int k, double* out);

/* ------------------------------------------------------------------ */
/* Problems and the Newton solver                                      */

typedef struct mn_problem mn_problem;
typedef struct mn_newton_trace mn_newton_trace;

/* Write F(x) into out (dim entries); return 0 on success. */
typedef int (*mn_vector_fn)(const double* x, double* out, void* user);
/* Write the dense Jacobian row-major into out (dim*dim entries). */
typedef int (*mn_jacobian_fn)(const double* x, double* out, void* user);

enum mn_solve_status {
  MN_SOLVE_CONVERGED = 0,
  MN_SOLVE_MAX_ITERS = 1,
  MN_SOLVE_SINGULAR_JACOBIAN = 2,
  MN_SOLVE_LEFT_DOMAIN = 3,
  MN_SOLVE_NONFINITE = 4
};

/* Registry ids: exp_quadratic_1d, power_5_3_1d, cubic_1d, poly2d.  Pass NAN
 * as kappa to keep each problem's default ball radius. */
MN_API int mn_problem_registry(const char* id, double kappa, mn_problem** out);
/* The scalar model paired with a registry problem. */
MN_API int mn_problem_registry_model(const char* id, mn_model** out);
/* Number of registry ids; copies the i-th id into buf (truncating). */
MN_API size_t mn_registry_count(void);
MN_API int mn_registry_id(size_t index, char* buf, size_t buflen);

/* 1-D odd extension F(x) = sign(x) f(|x|) of a scalar model; Newton started
 * at rho orbits with period 2, so rho is the sharp convergence radius. */
MN_API int mn_problem_worst_case(const mn_model* model, mn_problem** out);

/* Custom problem; jacobian may be NULL for central finite differences, x_star
 * NULL when no root is known (the domain ball then follows the start point). */
MN_API int mn_problem_custom(int dim, mn_vector_fn F, mn_jacobian_fn jacobian,
                             void* user, const double* x_star, double kappa,
                             mn_problem** out);
MN_API void mn_problem_free(mn_problem* problem);

MN_API int mn_problem_dim(const mn_problem* problem);
MN_API int mn_problem_kappa(const mn_problem* problem, double* out);
MN_API int mn_problem_has_root(const mn_problem* problem);
MN_API int mn_problem_root(const mn_problem* problem, double* out);

MN_API int mn_newton_solve(const mn_problem* problem, const double* x0, size_t dim,
                           int max_iters, double step_atol, double residual_atol,
                           mn_newton_trace** out);
MN_API void mn_newton_trace_free(mn_newton_trace* trace);
MN_API size_t mn_newton_trace_len(const mn_newton_trace* trace);
MN_API int mn_newton_trace_status(const mn_newton_trace* trace);
MN_API int mn_newton_trace_iterate(const mn_newton_trace* trace, size_t k, double* out);
MN_API int mn_newton_trace_residual(const mn_newton_trace* trace, size_t k, double* out);
/* Norm of the step that produced iterate k; fails for k = 0. */
MN_API int mn_newton_trace_step(const mn_newton_trace* trace, size_t k, double* out);
/* ||x_k - x*||; fails when the problem declared no root. */
MN_API int mn_newton_trace_error(const mn_newton_trace* trace, size_t k, double* out);
/* Period-2 orbit without convergence. */
MN_API int mn_newton_trace_two_cycle(const mn_newton_trace* trace, double tol);

/* ------------------------------------------------------------------ */
/* Matrix utilities                                                    */

/* Spectral norm of a row-major rows x cols matrix. */
MN_API int mn_operator_norm(const double* a, int rows, int cols, double* out);
/* 1/(1 - ||B - I||); requires ||B - I|| < 1 (row-major n x n). */
MN_API int mn_banach_inverse_bound(const double* b, int n, double* out);

/* ------------------------------------------------------------------ */
/* Certification                                                       */

typedef struct mn_report mn_report;

typedef struct {
  int hypothesis_samples;   /* sampled points in the ball (default 200) */
  int tau_samples;          /* grid on [0,1] (default 21) */
  int uniqueness_probes;    /* 0 disables the uniqueness check */
  unsigned long long seed;  /* probe/direction seed (default 20240501) */
} mn_certify_options;

MN_API void mn_certify_options_default(mn_certify_options* opt);

/* Solves from x0 and replays every certified bound against the trace.
 * Requires a problem with a known root and ||x0 - x*|| < r. */
MN_API int mn_certify(const mn_problem* problem, const mn_model* model,
                      const double* x0, size_t dim, int max_iters,
                      double step_atol, double residual_atol,
                      const mn_certify_options* opt, mn_report** out);
MN_API void mn_report_free(mn_report* report);
/* 1 when every check passed. */
MN_API int mn_report_passed(const mn_report* report);
MN_API size_t mn_report_violation_count(const mn_report* report);
/* Serialized report; free with mn_string_free. */
MN_API int mn_report_to_json(const mn_report* report, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MAJORANT_NEWTON_H */
