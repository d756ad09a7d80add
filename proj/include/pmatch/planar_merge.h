#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmatch/correspondence.h"
#include "pmatch/homography.h"
#include "pmatch/pentagon_match.h"

namespace pmatch {

struct MergeConfig {
  double cr_th = 0.05;
  /// Random (3, 2) vertex splits tried per pentagon pair.
  int merge_trials = 5;
  /// Minimum correspondences a lone pentagon's homography must explain.
  int min_support = 8;
  double inlier_tol = 10.0;
  /// Re-estimate each group on the correspondences its vertex fit explains.
  bool refit = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlanarGroup {
  std::vector<std::size_t> pentagon_ids;
  /// Sorted, deduplicated correspondence ids of all member vertices.
  std::vector<std::size_t> vertex_corr_ids;
  /// DLT fit over exactly vertex_corr_ids.
  Homographyd vertex_homography;
  /// Final estimate; equals vertex_homography when refit is off or no refit
  /// lowers the truncated cost.
  Homographyd homography;
  /// Convex hull of the member vertices in the first image over its area.
  double hull_area_fraction = 0;
  /// Correspondences within inlier_tol of `homography`.
  std::size_t support = 0;
};

struct GroupingResult {
  /// Sorted by descending pentagon count, then support.
  std::vector<PlanarGroup> groups;
  /// Pentagon ids rejected as erroneous matches.
  std::vector<std::size_t> discarded;
};

/// Coplanarity test for two matched pentagon pairs. Each trial picks three
/// vertex positions S at random: the first mixed pentagon takes pa's
/// vertices at S and pb's at the other two positions, the second takes the
/// complement. The test passes when both mixed pentagons shape-match in some
/// trial. The random stream depends only on the two index sets, so the test
/// is symmetric in its arguments.
bool cross_merge_test(const PentagonPair& pa, const PentagonPair& pb,
                      const CorrespondenceSet& corrs, const MergeConfig& cfg);

/// Greedy agglomeration followed by per-group homography fitting. Never
/// throws for an empty result.
GroupingResult group_pentagons(const std::vector<PentagonPair>& pentagons,
                               const CorrespondenceSet& corrs, double width,
                               double height, const MergeConfig& cfg);

/// As group_pentagons, but throws NoGroupFound when every pentagon is
/// discarded.
std::vector<PlanarGroup> build_planar_groups(
    const std::vector<PentagonPair>& pentagons, const CorrespondenceSet& corrs,
    double width, double height, const MergeConfig& cfg);

/// Fits a homography to the listed correspondences.
Homographyd fit_homography(const CorrespondenceSet& corrs,
                           const std::vector<std::size_t>& ids);

/// Sum over all correspondences of min(e^2, tol^2), e the forward transfer
/// error.
double truncated_cost(const Homographyd& h, const CorrespondenceSet& corrs,
                      double tol);

/// Refits on the correspondences within `tol` of the current model (and
/// allowed by `eligible`, when given) for as long as the truncated cost
/// strictly decreases, up to `max_rounds` refits.
Homographyd refine_homography(const Homographyd& h, const CorrespondenceSet& corrs,
                              double tol, const std::vector<bool>* eligible = nullptr,
                              int max_rounds = 5);

}  // namespace pmatch
