#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cli {

/// 17 significant digits: enough for binary64 values to survive a text
/// round trip bit-exactly.
std::string format_double(double value);

struct SolveRow {
  int k = 0;
  std::vector<double> x;
  double residual = 0.0;
  std::optional<double> step{};
  std::optional<double> err{};
  std::optional<double> t{};
  std::optional<double> ratio_linear{};
  std::optional<double> ratio_order{};
};

void write_solve_csv(std::ostream& out, const std::vector<SolveRow>& rows);
std::vector<SolveRow> parse_solve_csv(std::istream& in);

struct SweepRow {
  double x0_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  double final_error = 0.0;
  std::optional<bool> envelope_ok{};
  std::optional<double> order_tail{};
  bool two_cycle = false;
  std::optional<bool> qbound_ok{};
  std::vector<double> error_history;  // for plotting only, not serialized
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace cli
