#include "pmatch/correspondence.h"

#include <cmath>
#include <string>

#include "pmatch/error.h"

namespace pmatch {

void validate(const Correspondence& c) {
  if (!c.p1.allFinite() || !c.p2.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite keypoint coordinate");
  }
  if (c.confidence && !(*c.confidence >= 0.0 && *c.confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "confidence " + std::to_string(*c.confidence) +
                    " outside [0, 1]");
  }
}

CorrespondenceSet filter_by_confidence(const CorrespondenceSet& corrs,
                                       double min_conf) {
  CorrespondenceSet out;
  out.reserve(corrs.size());
  for (const auto& c : corrs) {
    if (!c.confidence || *c.confidence >= min_conf) out.push_back(c);
  }
  return out;
}

}  // namespace pmatch
