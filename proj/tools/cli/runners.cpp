#include "runners.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

#include "capi_util.hpp"
#include "csv.hpp"
#include "svg.hpp"

namespace cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ModelHandle build_model(const MajorantSpec& spec) {
  mn_model* raw = nullptr;
  if (spec.family == "holder") {
    check(mn_model_holder(*spec.K, *spec.p, &raw), "holder model");
  } else if (spec.family == "lipschitz") {
    // Lipschitz Jacobian reduces to the p = 1 power condition with
    // K = L * ||J(x*)^{-1}||.
    check(mn_model_holder(*spec.lipschitz_constant * *spec.inverse_norm, 1.0, &raw),
          "lipschitz model");
  } else if (spec.family == "generalized") {
    DensityHandle density;
    mn_density* raw_density = nullptr;
    if (!spec.density_file.empty()) {
      check(mn_density_from_file(spec.density_file.c_str(), spec.density_format.c_str(),
                                 &raw_density),
            "density file");
    } else {
      std::vector<double> breakpoints;
      std::vector<double> coeffs;
      breakpoints.push_back(spec.segments.front()[0]);
      for (const auto& seg : spec.segments) {
        breakpoints.push_back(seg[1]);
        for (std::size_t j = 2; j < 6; ++j) coeffs.push_back(seg[j]);
      }
      check(mn_density_piecewise(breakpoints.data(), coeffs.data(), spec.segments.size(),
                                 &raw_density),
            "density segments");
    }
    density.reset(raw_density);
    const double p = spec.p.value_or(std::numeric_limits<double>::quiet_NaN());
    check(mn_model_generalized(density.get(), p, &raw), "generalized model");
  } else {
    const double p = spec.p.value_or(std::numeric_limits<double>::quiet_NaN());
    check(mn_model_example(spec.example_name.c_str(), p, &raw), "example model");
  }
  return ModelHandle(raw);
}

ProblemHandle build_problem(const ExperimentConfig& config, const ModelHandle& model) {
  mn_problem* raw = nullptr;
  if (config.problem == "worst_case") {
    check(mn_problem_worst_case(model.get(), &raw), "worst-case instance");
  } else {
    const double kappa =
        config.kappa ? *config.kappa : std::numeric_limits<double>::quiet_NaN();
    check(mn_problem_registry(config.problem.c_str(), kappa, &raw), "registry problem");
  }
  return ProblemHandle(raw);
}

double resolve_kappa(const ExperimentConfig& config, const ProblemHandle& problem) {
  if (config.kappa) return *config.kappa;
  double kappa = 0.0;
  check(mn_problem_kappa(problem.get(), &kappa), "problem kappa");
  return kappa;
}

fs::path resolve_path(const GlobalOptions& global, const std::string& path) {
  fs::path p(path);
  if (!global.out_dir.empty() && p.is_relative()) p = fs::path(global.out_dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_text_file(const GlobalOptions& global, const std::string& path,
                     const std::string& content) {
  const fs::path full = resolve_path(global, path);
  std::ofstream out(full);
  if (!out) throw ConfigError("cannot write output file: " + full.string());
  out << content;
}

json radii_to_json(const mn_radii& radii) {
  return {{"kappa", radii.kappa},
          {"nu", radii.nu},
          {"rho", radii.rho},
          {"sigma", radii.sigma},
          {"r", radii.r},
          {"rho_is_optimal", radii.rho_is_optimal != 0},
          {"domain_truncated", radii.domain_truncated != 0},
          {"contraction_resumes", radii.contraction_resumes != 0},
          {"bisect_atol", radii.bisect_atol},
          {"grid_points", radii.grid_points}};
}

struct TraceData {
  NewtonTraceHandle trace;
  int status = MN_SOLVE_MAX_ITERS;
  std::size_t len = 0;
  bool has_errors = false;
  std::vector<double> errors;
  std::vector<double> residuals;
  std::vector<double> steps;  // steps[k-1] produced iterate k
};

TraceData solve_problem(const ProblemHandle& problem, const std::vector<double>& x0,
                        const Tolerances& tol) {
  TraceData data;
  mn_newton_trace* raw = nullptr;
  check(mn_newton_solve(problem.get(), x0.data(), x0.size(), tol.max_iters,
                        tol.step_atol, tol.residual_atol, &raw),
        "newton solve");
  data.trace.reset(raw);
  data.status = mn_newton_trace_status(data.trace.get());
  data.len = mn_newton_trace_len(data.trace.get());
  data.has_errors = mn_problem_has_root(problem.get()) != 0;
  data.residuals.resize(data.len);
  for (std::size_t k = 0; k < data.len; ++k)
    check(mn_newton_trace_residual(data.trace.get(), k, &data.residuals[k]), "residual");
  if (data.has_errors) {
    data.errors.resize(data.len);
    for (std::size_t k = 0; k < data.len; ++k)
      check(mn_newton_trace_error(data.trace.get(), k, &data.errors[k]), "error norm");
  }
  data.steps.resize(data.len > 0 ? data.len - 1 : 0);
  for (std::size_t k = 1; k < data.len; ++k)
    check(mn_newton_trace_step(data.trace.get(), k, &data.steps[k - 1]), "step norm");
  return data;
}

struct ScalarData {
  std::vector<double> t;
  std::vector<double> ratio_linear;
  std::vector<double> ratio_order;  // empty when the model has no exponent
};

// Companion scalar sequence from t0 = ||x0 - x*||; empty when t0 sits outside
// the contraction interval (nothing is certified there).
ScalarData companion_scalar(const ModelHandle& model, double t0, std::size_t newton_len,
                            double atol) {
  ScalarData data;
  if (!(t0 > 0.0) || newton_len < 2) return data;
  mn_scalar_trace* raw = nullptr;
  const int rc = mn_scalar_sequence(model.get(), t0, static_cast<int>(newton_len) - 1,
                                    std::min(atol, 1e-14), &raw);
  if (rc != MN_OK) return data;
  ScalarTraceHandle trace(raw);
  const std::size_t len = mn_scalar_trace_len(trace.get());
  data.t.resize(len);
  for (std::size_t k = 0; k < len; ++k)
    check(mn_scalar_trace_value(trace.get(), k, &data.t[k]), "scalar value");
  data.ratio_linear.resize(len > 0 ? len - 1 : 0);
  for (std::size_t k = 0; k + 1 < len; ++k)
    check(mn_scalar_trace_ratio_linear(trace.get(), k, &data.ratio_linear[k]), "ratio");
  double probe = 0.0;
  if (len > 1 && mn_scalar_trace_ratio_order(trace.get(), 0, &probe) == MN_OK) {
    data.ratio_order.resize(len - 1);
    for (std::size_t k = 0; k + 1 < len; ++k)
      check(mn_scalar_trace_ratio_order(trace.get(), k, &data.ratio_order[k]), "ratio");
  }
  return data;
}

std::vector<double> iterate_of(const TraceData& data, std::size_t k, int dim) {
  std::vector<double> x(static_cast<std::size_t>(dim));
  check(mn_newton_trace_iterate(data.trace.get(), k, x.data()), "iterate");
  return x;
}

int thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("MAJORANT_NEWTON_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return static_cast<int>(n);
}

std::vector<double> sweep_direction(int dim, std::uint64_t seed) {
  std::vector<double> dir(static_cast<std::size_t>(dim), 0.0);
  if (dim == 1) {
    dir[0] = 1.0;
    return dir;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double norm = 0.0;
  while (norm < 1e-12) {
    norm = 0.0;
    for (auto& v : dir) {
      v = gauss(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
  }
  for (auto& v : dir) v /= norm;
  return dir;
}

}  // namespace

int run_radii(const ExperimentConfig& config, const GlobalOptions& global) {
  const ModelHandle model = build_model(config.majorant);
  double kappa = 0.0;
  if (config.kappa) {
    kappa = *config.kappa;
  } else {
    const ProblemHandle problem = build_problem(config, model);
    kappa = resolve_kappa(config, problem);
  }

  mn_radii radii{};
  check(mn_compute_radii(model.get(), kappa, &radii), "radii");

  std::cout << "quantity        value\n"
            << "kappa           " << format_double(radii.kappa) << '\n'
            << "nu              " << format_double(radii.nu) << '\n'
            << "rho             " << format_double(radii.rho) << '\n'
            << "sigma           " << format_double(radii.sigma) << '\n'
            << "r = min(k,rho)  " << format_double(radii.r) << '\n'
            << "rho optimal     " << (radii.rho_is_optimal ? "yes" : "no") << '\n';
  if (radii.domain_truncated) std::cout << "note: unbounded domain truncated at scan cap\n";

  if (!config.outputs.report_path.empty())
    write_text_file(global, config.outputs.report_path, radii_to_json(radii).dump(2) + "\n");
  return 0;
}

int run_solve(const ExperimentConfig& config, const GlobalOptions& global) {
  if (config.starts.size() != 1)
    throw ConfigError("solve: config must provide exactly one x0 vector");
  const ModelHandle model = build_model(config.majorant);
  const ProblemHandle problem = build_problem(config, model);
  const int dim = mn_problem_dim(problem.get());
  if (static_cast<int>(config.starts[0].size()) != dim)
    throw ConfigError("solve: x0 has wrong dimension for the problem");

  TraceData data;
  try {
    data = solve_problem(problem, config.starts[0], config.tolerances);
  } catch (const ApiError& e) {
    if (e.code == MN_ERR_DOMAIN) throw ConfigError(e.what());  // x0 outside the ball
    throw;
  }

  const double t0 = data.has_errors ? data.errors[0] : 0.0;
  const ScalarData scalar =
      companion_scalar(model, t0, data.len, config.tolerances.step_atol);

  std::vector<SolveRow> rows(data.len);
  for (std::size_t k = 0; k < data.len; ++k) {
    SolveRow& row = rows[k];
    row.k = static_cast<int>(k);
    row.x = iterate_of(data, k, dim);
    row.residual = data.residuals[k];
    if (k >= 1) row.step = data.steps[k - 1];
    if (data.has_errors) row.err = data.errors[k];
    if (k < scalar.t.size()) row.t = scalar.t[k];
    if (k >= 1 && k - 1 < scalar.ratio_linear.size())
      row.ratio_linear = scalar.ratio_linear[k - 1];
    if (k >= 1 && k - 1 < scalar.ratio_order.size())
      row.ratio_order = scalar.ratio_order[k - 1];
  }

  std::ostringstream csv;
  write_solve_csv(csv, rows);
  if (!config.outputs.csv_path.empty())
    write_text_file(global, config.outputs.csv_path, csv.str());
  else
    std::cout << csv.str();

  if (global.verbose)
    std::cerr << "solve: status " << data.status << " after " << data.len - 1
              << " iterations\n";
  return data.status == MN_SOLVE_CONVERGED ? 0 : 4;
}

int run_certify(const ExperimentConfig& config, const GlobalOptions& global) {
  if (config.starts.size() != 1)
    throw ConfigError("certify: config must provide exactly one x0 vector");
  const ModelHandle model = build_model(config.majorant);
  const ProblemHandle problem = build_problem(config, model);
  if (!mn_problem_has_root(problem.get()))
    throw ConfigError("certify: problem has no known root");
  const int dim = mn_problem_dim(problem.get());
  if (static_cast<int>(config.starts[0].size()) != dim)
    throw ConfigError("certify: x0 has wrong dimension for the problem");

  mn_certify_options opt;
  mn_certify_options_default(&opt);
  opt.uniqueness_probes = config.uniqueness_probes;
  opt.seed = global.seed.value_or(config.seed);

  mn_report* raw = nullptr;
  const int rc = mn_certify(problem.get(), model.get(), config.starts[0].data(),
                            config.starts[0].size(), config.tolerances.max_iters,
                            config.tolerances.step_atol, config.tolerances.residual_atol,
                            &opt, &raw);
  if (rc == MN_ERR_DOMAIN || rc == MN_ERR_ITERATION)
    throw ConfigError(std::string("certify: ") + mn_last_error());
  check(rc, "certify");
  ReportHandle report(raw);

  char* text = nullptr;
  check(mn_report_to_json(report.get(), &text), "report json");
  std::string body(text);
  mn_string_free(text);

  if (!config.outputs.report_path.empty())
    write_text_file(global, config.outputs.report_path, body + "\n");
  else
    std::cout << body << '\n';

  const bool passed = mn_report_passed(report.get()) != 0;
  if (global.verbose)
    std::cerr << "certify: " << (passed ? "all checks passed" : "violations found")
              << " (" << mn_report_violation_count(report.get()) << " violations)\n";
  return passed ? 0 : 2;
}

int run_sweep(const ExperimentConfig& config, const GlobalOptions& global) {
  if (!config.sweep && config.starts.empty())
    throw ConfigError("sweep: config must provide a radial x0 spec or a list of starts");
  const ModelHandle model = build_model(config.majorant);
  const ProblemHandle problem = build_problem(config, model);
  if (!mn_problem_has_root(problem.get()))
    throw ConfigError("sweep: problem has no known root");
  const int dim = mn_problem_dim(problem.get());
  const double kappa = resolve_kappa(config, problem);

  mn_radii radii{};
  check(mn_compute_radii(model.get(), kappa, &radii), "radii");

  double rate_exponent = 0.0;
  check(mn_model_rate_exponent(model.get(), &rate_exponent), "rate exponent");
  const bool has_order = !std::isnan(rate_exponent);

  const std::uint64_t seed = global.seed.value_or(config.seed);
  std::vector<double> root(static_cast<std::size_t>(dim), 0.0);
  check(mn_problem_root(problem.get(), root.data()), "problem root");

  // Starting points: a radial grid of fractions of r, or the explicit list.
  std::vector<std::vector<double>> starts;
  if (config.sweep) {
    const RadialSweep& sweep = *config.sweep;
    for (int i = 0; i < sweep.count; ++i) {
      const double frac =
          sweep.count == 1
              ? sweep.min_frac
              : sweep.min_frac + (sweep.max_frac - sweep.min_frac) *
                                     static_cast<double>(i) /
                                     static_cast<double>(sweep.count - 1);
      const double t0 = frac * radii.r;
      const std::vector<double> dir = sweep_direction(dim, seed + static_cast<std::uint64_t>(i));
      std::vector<double> x0(root);
      for (int d = 0; d < dim; ++d)
        x0[static_cast<std::size_t>(d)] += t0 * dir[static_cast<std::size_t>(d)];
      starts.push_back(std::move(x0));
    }
  } else {
    for (const auto& x0 : config.starts) {
      if (static_cast<int>(x0.size()) != dim)
        throw ConfigError("sweep: x0 entry has wrong dimension for the problem");
      starts.push_back(x0);
    }
  }

  std::vector<SweepRow> rows(starts.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size() || failed.load()) return;
      try {
        const TraceData data = solve_problem(problem, starts[i], config.tolerances);
        SweepRow& row = rows[i];
        row.x0_norm = data.errors[0];
        row.iterations = static_cast<int>(data.len) - 1;
        row.final_error = data.errors.empty() ? 0.0 : data.errors.back();
        row.error_history = data.errors;
        // Converged means converged to the declared root; a run that settles
        // on some other zero of F is a failure of the radius claim.
        row.converged = data.status == MN_SOLVE_CONVERGED && row.final_error <= 1e-8;
        row.two_cycle = mn_newton_trace_two_cycle(data.trace.get(), 1e-10) != 0;

        const ScalarData scalar = companion_scalar(model, row.x0_norm, data.len,
                                                   config.tolerances.step_atol);
        if (!scalar.t.empty()) {
          bool envelope = true;
          const std::size_t n = std::min(scalar.t.size(), data.errors.size());
          for (std::size_t k = 0; k < n; ++k)
            envelope = envelope &&
                       data.errors[k] <= scalar.t[k] + 1e-10 * (1.0 + scalar.t[k]);
          row.envelope_ok = envelope;
          if (!scalar.ratio_order.empty()) row.order_tail = scalar.ratio_order.back();
          if (has_order && scalar.t.size() >= 2) {
            double bound = 0.0;
            if (mn_apriori_bound(scalar.t[0], scalar.t[1], rate_exponent,
                                 row.iterations, &bound) == MN_OK)
              row.qbound_ok = row.final_error <= bound + 1e-10 * (1.0 + bound);
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure_message = e.what();
        return;
      }
    }
  };

  const int threads = std::min<int>(thread_budget(), static_cast<int>(rows.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw ConfigError("sweep entry failed: " + failure_message);

  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.x0_norm < b.x0_norm; });

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  if (!config.outputs.csv_path.empty())
    write_text_file(global, config.outputs.csv_path, csv.str());
  else
    std::cout << csv.str();

  if (!config.outputs.plot_path.empty()) {
    const std::string svg =
        render_sweep_svg(rows, radii.r, config.problem + " convergence sweep");
    write_text_file(global, config.outputs.plot_path, svg);
  }
  return 0;
}

}  // namespace cli
