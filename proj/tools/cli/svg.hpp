#pragma once

#include <string>
#include <vector>

#include "csv.hpp"

namespace cli {

/// Static convergence plot: log10 of the error per iteration for every sweep
/// entry, plus a strip along the bottom marking each start as converged or
/// not against the x0/r fraction (dashed line at the contraction boundary).
std::string render_sweep_svg(const std::vector<SweepRow>& rows, double radius,
                             const std::string& title);

}  // namespace cli
