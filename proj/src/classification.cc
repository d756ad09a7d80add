#include "pmatch/classification.h"

#include <algorithm>
#include <limits>

#include "pmatch/error.h"

namespace pmatch {

double correspondence_error(const Homographyd& h, const Correspondence& c,
                            TransferMode mode) {
  const double forward = transfer_error(h, c.p1, c.p2);
  if (mode == TransferMode::kForward) return forward;
  const double backward = transfer_error(h.inverse(), c.p2, c.p1);
  return std::max(forward, backward);
}

std::vector<MatchLabel> classify(const CorrespondenceSet& corrs,
                                 std::span<const Homographyd> homographies,
                                 double tol, TransferMode mode) {
  if (homographies.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "classify needs at least one model");
  }
  if (!(tol > 0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  // Inverses once, not per correspondence.
  std::vector<Homographyd> inverses;
  if (mode == TransferMode::kSymmetric) {
    for (const auto& h : homographies) inverses.push_back(h.inverse());
  }
  std::vector<MatchLabel> labels(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const auto& c = corrs[i];
    double best = std::numeric_limits<double>::infinity();
    int best_g = -1;
    for (std::size_t g = 0; g < homographies.size(); ++g) {
      double e = transfer_error(homographies[g], c.p1, c.p2);
      if (mode == TransferMode::kSymmetric) {
        e = std::max(e, transfer_error(inverses[g], c.p2, c.p1));
      }
      if (e < best || best_g < 0) {
        best = e;
        best_g = static_cast<int>(g);
      }
    }
    labels[i].corr_id = i;
    labels[i].reproj_error = best;
    labels[i].group_id = best <= tol ? best_g : -1;
  }
  return labels;
}

std::vector<MatchLabel> classify(const CorrespondenceSet& corrs,
                                 const std::vector<PlanarGroup>& groups,
                                 double tol, TransferMode mode) {
  std::vector<Homographyd> hs;
  hs.reserve(groups.size());
  for (const auto& g : groups) hs.push_back(g.homography);
  return classify(corrs, std::span<const Homographyd>(hs), tol, mode);
}

const char* to_string(FourWay category) {
  switch (category) {
    case FourWay::kBothInlier: return "both_inlier";
    case FourWay::kBothOutlier: return "both_outlier";
    case FourWay::kPOnly: return "p_only";
    case FourWay::kGOnly: return "g_only";
  }
  return "unknown";
}

double FourWaySummary::inlier_rate() const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(both_inlier) / static_cast<double>(n);
}

FourWayResult four_way(const CorrespondenceSet& corrs,
                       std::span<const Homographyd> h_p, const Homographyd& h_g,
                       double tol, TransferMode mode) {
  const std::vector<MatchLabel> under_p = classify(corrs, h_p, tol, mode);
  const std::vector<MatchLabel> under_g =
      classify(corrs, std::span<const Homographyd>(&h_g, 1), tol, mode);
  FourWayResult r;
  r.labels.reserve(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const bool in_p = under_p[i].is_inlier();
    const bool in_g = under_g[i].is_inlier();
    FourWay cat;
    if (in_p && in_g) {
      cat = FourWay::kBothInlier;
      ++r.summary.both_inlier;
    } else if (!in_p && !in_g) {
      cat = FourWay::kBothOutlier;
      ++r.summary.both_outlier;
    } else if (in_p) {
      cat = FourWay::kPOnly;
      ++r.summary.p_only;
    } else {
      cat = FourWay::kGOnly;
      ++r.summary.g_only;
    }
    r.labels.push_back(cat);
  }
  return r;
}

FourWayResult four_way(const CorrespondenceSet& corrs, const Homographyd& h_p,
                       const Homographyd& h_g, double tol, TransferMode mode) {
  return four_way(corrs, std::span<const Homographyd>(&h_p, 1), h_g, tol, mode);
}

}  // namespace pmatch
