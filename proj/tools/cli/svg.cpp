#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cli {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kPlotBottom = 400.0;
constexpr double kStripTop = 452.0;
constexpr double kStripHeight = 26.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

double clamp_log(double value) {
  if (!(value > 0.0)) return -17.0;
  return std::max(std::log10(value), -17.0);
}

}  // namespace

std::string render_sweep_svg(const std::vector<SweepRow>& rows, double radius,
                             const std::string& title) {
  std::size_t max_len = 2;
  double lo = 0.0, hi = -17.0;
  for (const auto& row : rows) {
    max_len = std::max(max_len, row.error_history.size());
    for (double e : row.error_history) {
      const double v = clamp_log(e);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  lo -= 0.5;
  hi += 0.5;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kPlotBottom - kMarginTop;
  auto x_of = [&](double k) {
    return kMarginLeft + plot_w * k / static_cast<double>(max_len - 1);
  };
  auto y_of = [&](double v) { return kPlotBottom - plot_h * (v - lo) / (hi - lo); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";

  // Axes and gridlines.
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << kPlotBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kPlotBottom << "\" x2=\""
      << kWidth - kMarginRight << "\" y2=\"" << kPlotBottom << "\" stroke=\"black\"/>\n";
  const int y_ticks = 6;
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = lo + (hi - lo) * i / y_ticks;
    const double y = y_of(v);
    svg << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << y << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"0.6\"/>\n"
        << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << std::round(v * 10.0) / 10.0 << "</text>\n";
  }
  svg << "<text x=\"16\" y=\"" << (kMarginTop + kPlotBottom) / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << (kMarginTop + kPlotBottom) / 2 << ")\" text-anchor=\"middle\">log10 error</text>\n"
      << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kPlotBottom + 30
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         "iteration k</text>\n";

  // One polyline per sweep entry.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.error_history.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 10]
        << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t k = 0; k < row.error_history.size(); ++k) {
      svg << x_of(static_cast<double>(k)) << ','
          << y_of(clamp_log(row.error_history[k])) << ' ';
    }
    svg << "\"/>\n";
  }

  // Convergence strip against the x0/r fraction, boundary marked at 1.
  double max_frac = 1.05;
  for (const auto& row : rows) max_frac = std::max(max_frac, row.x0_norm / radius + 0.05);
  auto strip_x = [&](double frac) { return kMarginLeft + plot_w * frac / max_frac; };
  svg << "<text x=\"" << kMarginLeft << "\" y=\"" << kStripTop - 8
      << "\" font-family=\"sans-serif\" font-size=\"12\">convergence vs x0/r"
         " (green = converged)</text>\n";
  for (const auto& row : rows) {
    const double frac = row.x0_norm / radius;
    svg << "<rect x=\"" << strip_x(frac) - 4 << "\" y=\"" << kStripTop
        << "\" width=\"8\" height=\"" << kStripHeight << "\" fill=\""
        << (row.converged ? "#2ca02c" : "#d62728") << "\"/>\n";
  }
  svg << "<line x1=\"" << strip_x(1.0) << "\" y1=\"" << kStripTop - 4 << "\" x2=\""
      << strip_x(1.0) << "\" y2=\"" << kStripTop + kStripHeight + 4
      << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n"
      << "<text x=\"" << strip_x(1.0) << "\" y=\"" << kStripTop + kStripHeight + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
         "x0 = r</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cli
