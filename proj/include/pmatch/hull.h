#pragma once

#include <algorithm>
#include <vector>

#include "pmatch/homography.h"

namespace pmatch {

/// Area of the convex hull of `points` (Andrew's monotone chain followed by
/// the shoelace formula). Collinear or fewer than three points give 0.
template <typename T>
T convex_hull_area(std::vector<Point2<T>> points) {
  if (points.size() < 3) return T(0);
  std::sort(points.begin(), points.end(),
            [](const Point2<T>& a, const Point2<T>& b) {
              return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
            });
  auto turn = [](const Point2<T>& o, const Point2<T>& a, const Point2<T>& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Point2<T>> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= T(0)) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = points[i];
    while (k >= lower && turn(hull[k - 2], hull[k - 1], p) <= T(0)) --k;
    hull[k++] = p;
  }
  hull.resize(k > 0 ? k - 1 : 0);
  if (hull.size() < 3) return T(0);
  T twice_area = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice_area += a.x() * b.y() - a.y() * b.x();
  }
  return std::abs(twice_area) / T(2);
}

}  // namespace pmatch
