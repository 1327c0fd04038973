#include "csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

#include "capi_util.hpp"

namespace cli {

namespace {

std::string opt_str(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

std::string join_components(const std::vector<double>& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ';';
    out += format_double(x[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

// strtod instead of stod: the latter throws on subnormals, which are valid
// trace values.
double parse_double(const std::string& field) {
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end == field.c_str()) throw ConfigError("csv: not a number: " + field);
  return value;
}

std::optional<double> parse_opt(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return parse_double(field);
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_solve_csv(std::ostream& out, const std::vector<SolveRow>& rows) {
  out << "k,x,residual,step,err,t,ratio_linear,ratio_order\n";
  for (const auto& row : rows) {
    out << row.k << ',' << join_components(row.x) << ',' << format_double(row.residual)
        << ',' << opt_str(row.step) << ',' << opt_str(row.err) << ',' << opt_str(row.t)
        << ',' << opt_str(row.ratio_linear) << ',' << opt_str(row.ratio_order) << '\n';
  }
}

std::vector<SolveRow> parse_solve_csv(std::istream& in) {
  std::vector<SolveRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("solve csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 8) throw ConfigError("solve csv: malformed row: " + line);
    SolveRow row;
    row.k = std::stoi(fields[0]);
    for (const auto& component : split(fields[1], ';'))
      row.x.push_back(parse_double(component));
    row.residual = parse_double(fields[2]);
    row.step = parse_opt(fields[3]);
    row.err = parse_opt(fields[4]);
    row.t = parse_opt(fields[5]);
    row.ratio_linear = parse_opt(fields[6]);
    row.ratio_order = parse_opt(fields[7]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "x0_norm,converged,iterations,final_error,envelope_ok,order_tail,two_cycle,qbound_ok\n";
  for (const auto& row : rows) {
    out << format_double(row.x0_norm) << ',' << (row.converged ? 1 : 0) << ','
        << row.iterations << ',' << format_double(row.final_error) << ',';
    if (row.envelope_ok) out << (*row.envelope_ok ? 1 : 0);
    out << ',' << opt_str(row.order_tail) << ',' << (row.two_cycle ? 1 : 0) << ',';
    if (row.qbound_ok) out << (*row.qbound_ok ? 1 : 0);
    out << '\n';
  }
}

}  // namespace cli
