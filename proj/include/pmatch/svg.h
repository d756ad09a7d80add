#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pmatch/classification.h"
#include "pmatch/correspondence.h"

namespace pmatch {

struct OverlayOptions {
  double width = 0;
  double height = 0;
  /// Gap between the two image frames (px).
  double gap = 20;
  double point_radius = 2.5;
};

/// Side-by-side first/second image frames with matched pentagons outlined
/// in red in both. Points are coloured by four-way category when given
/// (yellow both inlier, blue both outlier, red estimate only, purple ground
/// truth only), otherwise by group label (yellow, green, ... ; blue outlier).
std::string render_overlay_svg(
    const CorrespondenceSet& corrs,
    const std::vector<std::array<std::size_t, 5>>& pentagons,
    const std::vector<MatchLabel>& labels,
    const std::optional<std::vector<FourWay>>& four_way,
    const OverlayOptions& opts);

}  // namespace pmatch
