#include "pmatch/pipeline.h"

#include "pmatch/error.h"

namespace pmatch {

PipelineResult estimate_planes(const CorrespondenceSet& corrs, double width,
                               double height, const PipelineConfig& cfg) {
  if (corrs.size() < 5) {
    throw Error(ErrorCode::kNoPentagonFound,
                "need at least 5 correspondences");
  }
  PipelineResult r;
  r.search = search_pentagons(corrs, width, height, cfg.match);
  if (r.search.pentagons.empty()) {
    throw Error(ErrorCode::kNoPentagonFound,
                "no matched pentagon within the trial budget");
  }
  r.grouping = group_pentagons(r.search.pentagons, corrs, width, height,
                               cfg.merge);
  if (r.grouping.groups.empty()) {
    throw Error(ErrorCode::kNoGroupFound,
                "every matched pentagon was rejected as an erroneous match");
  }
  return r;
}

}  // namespace pmatch
