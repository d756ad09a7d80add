#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmatch/correspondence.h"
#include "pmatch/homography.h"

namespace pmatch {

struct RansacConfig {
  /// Inlier threshold on forward transfer error (px).
  double e_t = 10.0;
  /// Iterations.
  int k = 1000;
  int sample_size = 4;
  std::uint64_t seed = 0;
  /// Accept the first minimal model whose mean error over all
  /// correspondences is below e_t, without refitting.
  bool literal = false;
  /// Refit the best model on its consensus set (consensus mode only).
  bool refit = true;
  int threads = 1;

  void validate() const;
};

struct RansacResult {
  bool success = false;
  Homographyd homography;
  /// Correspondences within e_t of `homography`.
  std::vector<std::size_t> inliers;
  /// Mean error over `inliers`.
  double mean_inlier_error = 0;
  /// Iteration that produced the selected minimal model, -1 if none.
  int best_iteration = -1;
  int iterations = 0;
};

/// Baseline homography RANSAC. Iteration i draws its minimal sample from a
/// stream derived from (seed, i), so the selected model does not depend on
/// the thread count. Throws InsufficientData for fewer than four pairs;
/// an unsuccessful search is reported through `success == false`.
RansacResult ransac_homography(const CorrespondenceSet& corrs,
                               const RansacConfig& cfg);

}  // namespace pmatch
