#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmatch/correspondence.h"
#include "pmatch/homography.h"
#include "pmatch/planar_merge.h"

namespace pmatch {

enum class TransferMode {
  /// |H p1 - p2|
  kForward,
  /// max(|H p1 - p2|, |H^-1 p2 - p1|)
  kSymmetric,
};

double correspondence_error(const Homographyd& h, const Correspondence& c,
                            TransferMode mode);

struct MatchLabel {
  std::size_t corr_id = 0;
  /// Index of the explaining group, or -1 for an outlier.
  int group_id = -1;
  /// Smallest error over all groups.
  double reproj_error = 0;

  bool is_inlier() const { return group_id >= 0; }
};

/// Labels each correspondence as an inlier of the group with the smallest
/// error (ties to the lower id) when that error is within `tol`, otherwise
/// as an outlier.
std::vector<MatchLabel> classify(const CorrespondenceSet& corrs,
                                 std::span<const Homographyd> homographies,
                                 double tol,
                                 TransferMode mode = TransferMode::kForward);

std::vector<MatchLabel> classify(const CorrespondenceSet& corrs,
                                 const std::vector<PlanarGroup>& groups,
                                 double tol,
                                 TransferMode mode = TransferMode::kForward);

enum class FourWay { kBothInlier, kBothOutlier, kPOnly, kGOnly };

const char* to_string(FourWay category);

struct FourWaySummary {
  std::size_t both_inlier = 0;
  std::size_t both_outlier = 0;
  /// Inlier under the estimate but not under ground truth.
  std::size_t p_only = 0;
  /// Inlier under ground truth but not under the estimate.
  std::size_t g_only = 0;

  std::size_t total() const {
    return both_inlier + both_outlier + p_only + g_only;
  }
  /// both_inlier / total.
  double inlier_rate() const;
};

struct FourWayResult {
  std::vector<FourWay> labels;
  FourWaySummary summary;
};

/// Cross-tabulates inlier status under an estimated (h_p) and a ground-truth
/// (h_g) homography.
FourWayResult four_way(const CorrespondenceSet& corrs, const Homographyd& h_p,
                       const Homographyd& h_g, double tol,
                       TransferMode mode = TransferMode::kForward);

/// Multi-model variant: a correspondence is an estimated inlier when any of
/// `h_p` explains it within `tol`.
FourWayResult four_way(const CorrespondenceSet& corrs,
                       std::span<const Homographyd> h_p, const Homographyd& h_g,
                       double tol, TransferMode mode = TransferMode::kForward);

}  // namespace pmatch
