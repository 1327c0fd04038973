#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <majorant_newton.h>

namespace cli {

/// Configuration or validation problem; the CLI maps it to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A library call failed; carries the mn_error code.
struct ApiError : std::runtime_error {
  ApiError(int code_, const std::string& what) : std::runtime_error(what), code(code_) {}
  int code;
};

inline void check(int rc, const char* context) {
  if (rc != MN_OK)
    throw ApiError(rc, std::string(context) + ": " + mn_last_error());
}

struct ModelDeleter {
  void operator()(mn_model* m) const { mn_model_free(m); }
};
struct DensityDeleter {
  void operator()(mn_density* d) const { mn_density_free(d); }
};
struct ProblemDeleter {
  void operator()(mn_problem* p) const { mn_problem_free(p); }
};
struct ScalarTraceDeleter {
  void operator()(mn_scalar_trace* t) const { mn_scalar_trace_free(t); }
};
struct NewtonTraceDeleter {
  void operator()(mn_newton_trace* t) const { mn_newton_trace_free(t); }
};
struct ReportDeleter {
  void operator()(mn_report* r) const { mn_report_free(r); }
};

using ModelHandle = std::unique_ptr<mn_model, ModelDeleter>;
using DensityHandle = std::unique_ptr<mn_density, DensityDeleter>;
using ProblemHandle = std::unique_ptr<mn_problem, ProblemDeleter>;
using ScalarTraceHandle = std::unique_ptr<mn_scalar_trace, ScalarTraceDeleter>;
using NewtonTraceHandle = std::unique_ptr<mn_newton_trace, NewtonTraceDeleter>;
using ReportHandle = std::unique_ptr<mn_report, ReportDeleter>;

}  // namespace cli
