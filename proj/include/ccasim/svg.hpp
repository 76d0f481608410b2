#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ccasim/analysis.hpp"

namespace ccasim {

/// Self-contained SVG: flow_mean over density as a connected scatter on the
/// left axis, cc_mean per bin on a fixed [-1, 1] right axis. Deterministic
/// output (no timestamps, stable number formatting).
std::string render_diagram_svg(std::span<const DiagramBin> bins,
                               std::string_view title);

}  // namespace ccasim
