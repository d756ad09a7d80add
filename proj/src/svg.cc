#include "pmatch/svg.h"

#include <cstdio>
#include <string>

namespace pmatch {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* group_colour(int group_id) {
  static const char* const kPalette[] = {"#ffd700", "#32cd32", "#ff8c00",
                                         "#00ced1", "#ff69b4", "#8b4513"};
  if (group_id < 0) return "#1e90ff";
  return kPalette[static_cast<std::size_t>(group_id) % 6];
}

const char* four_way_colour(FourWay c) {
  switch (c) {
    case FourWay::kBothInlier: return "#ffd700";
    case FourWay::kBothOutlier: return "#1e90ff";
    case FourWay::kPOnly: return "#ff0000";
    case FourWay::kGOnly: return "#800080";
  }
  return "#000000";
}

}  // namespace

std::string render_overlay_svg(
    const CorrespondenceSet& corrs,
    const std::vector<std::array<std::size_t, 5>>& pentagons,
    const std::vector<MatchLabel>& labels,
    const std::optional<std::vector<FourWay>>& four_way,
    const OverlayOptions& opts) {
  const double offset = opts.width + opts.gap;
  const double total_w = 2 * opts.width + opts.gap;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(total_w) +
       "\" height=\"" + num(opts.height) + "\" viewBox=\"0 0 " + num(total_w) +
       " " + num(opts.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(opts.width) + "\" height=\"" +
       num(opts.height) + "\" fill=\"#202020\" stroke=\"#808080\"/>\n";
  s += "<rect x=\"" + num(offset) + "\" y=\"0\" width=\"" + num(opts.width) +
       "\" height=\"" + num(opts.height) + "\" fill=\"#202020\" stroke=\"#808080\"/>\n";

  s += "<g fill=\"none\" stroke=\"#ff0000\" stroke-width=\"1.5\">\n";
  for (const auto& p : pentagons) {
    for (int image = 0; image < 2; ++image) {
      s += "<polygon points=\"";
      for (int k = 0; k < 5; ++k) {
        const auto& c = corrs.at(p[k]);
        const Point2d q = image == 0 ? c.p1 : Point2d(c.p2.x() + offset, c.p2.y());
        if (k) s += " ";
        s += num(q.x()) + "," + num(q.y());
      }
      s += "\"/>\n";
    }
  }
  s += "</g>\n";

  s += "<g stroke=\"none\">\n";
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const char* colour = four_way ? four_way_colour((*four_way)[i])
                         : i < labels.size() ? group_colour(labels[i].group_id)
                                             : "#ffffff";
    const auto& c = corrs[i];
    s += "<circle cx=\"" + num(c.p1.x()) + "\" cy=\"" + num(c.p1.y()) + "\" r=\"" +
         num(opts.point_radius) + "\" fill=\"" + colour + "\"/>\n";
    s += "<circle cx=\"" + num(c.p2.x() + offset) + "\" cy=\"" + num(c.p2.y()) +
         "\" r=\"" + num(opts.point_radius) + "\" fill=\"" + colour + "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace pmatch
