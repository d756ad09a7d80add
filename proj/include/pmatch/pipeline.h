#pragma once

#include <vector>

#include "pmatch/correspondence.h"
#include "pmatch/pentagon_match.h"
#include "pmatch/planar_merge.h"

namespace pmatch {

struct PipelineConfig {
  MatchConfig match;
  MergeConfig merge;

  /// Copies the shared knobs (cr_th, seed) from `match` into `merge`.
  PipelineConfig& sync() {
    merge.cr_th = match.cr_th;
    merge.seed = match.seed;
    return *this;
  }
};

struct PipelineResult {
  PentagonSearch search;
  GroupingResult grouping;
};

/// Pentagon search followed by planar grouping. Throws NoPentagonFound or
/// NoGroupFound when the respective stage comes back empty.
PipelineResult estimate_planes(const CorrespondenceSet& corrs, double width,
                               double height, const PipelineConfig& cfg);

}  // namespace pmatch
