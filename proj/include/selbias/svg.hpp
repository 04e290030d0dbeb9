#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "selbias/montecarlo.hpp"

namespace selbias {

struct SvgOptions {
  double width = 800.0;
  double height = 500.0;
};

/// Renders the sweep as a self-contained SVG (no external assets):
/// x = target correlation rho, y = estimated annual progress in percent,
/// median line with a +-1 sd band, dashed analytic plim overlay, and one
/// horizontal reference line at the true rate. Requires >= 2 rows.
void emit_figure_svg(const std::vector<SweepRow>& rows, double true_ratio,
                     const std::filesystem::path& path,
                     const SvgOptions& opts = {});

/// Same, returned as a string (the file variant writes exactly this).
std::string render_figure_svg(const std::vector<SweepRow>& rows,
                              double true_ratio, const SvgOptions& opts = {});

}  // namespace selbias
