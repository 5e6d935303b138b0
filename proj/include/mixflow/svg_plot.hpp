#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixflow/scenario.hpp"

namespace mixflow {

// Self-contained SVG files: per snapshot one density and one velocity
// profile (both classes overlaid), plus one space-time heatmap per class and
// quantity with one row per snapshot. Velocity axes always contain
// [0, car v_max]. An empty trace is a NoDataError.
std::vector<std::filesystem::path> render_plots(const SimulationTrace& t,
                                                const std::filesystem::path& out_dir);

}  // namespace mixflow
