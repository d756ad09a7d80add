#pragma once

#include <optional>
#include <vector>

#include "pmatch/homography.h"

namespace pmatch {

/// One putative match: p1 in the first image, p2 in the second.
struct Correspondence {
  Point2d p1;
  Point2d p2;
  std::optional<double> confidence;
};

using CorrespondenceSet = std::vector<Correspondence>;

/// Throws InvalidArgument on non-finite coordinates or a confidence outside
/// [0, 1].
void validate(const Correspondence& c);

/// Keeps correspondences whose confidence is at least `min_conf`. Entries
/// without a confidence are kept.
CorrespondenceSet filter_by_confidence(const CorrespondenceSet& corrs,
                                       double min_conf);

}  // namespace pmatch
