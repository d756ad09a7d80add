#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmatch/correspondence.h"
#include "pmatch/homography.h"
#include "pmatch/pentagon_match.h"
#include "pmatch/random.h"

namespace pmatch {

struct SyntheticSceneConfig {
  double width = 640;
  double height = 480;
  std::size_t n_inliers = 300;
  std::size_t n_outliers = 300;
  double noise_sigma = 0.5;
  /// 1, or 2 for a left/right split of the first image.
  int n_planes = 1;
  /// 0 gives the identity; 1 gives the full perturbation ranges.
  double homography_magnitude = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticScene {
  CorrespondenceSet corrs;
  /// Ground truth, one per plane.
  std::vector<Homographyd> plane_homographies;
  /// Per correspondence: 0 for an outlier, k for an inlier of plane k.
  std::vector<int> labels;
};

/// Random homography around the image centre: rotation up to 30 degrees,
/// anisotropic scale in [0.7, 1.4], perspective terms up to 1e-3 and
/// translation up to 0.2 * width, every range scaled by `magnitude`.
Matrix3<double> random_homography_matrix(Rng& rng, double width, double height,
                                         double magnitude);

/// Region of the first image covered by plane `k` (1-based).
Rect plane_region(const SyntheticSceneConfig& cfg, int k);

/// Inliers have p1 uniform over their plane's region and p2 = H p1 plus
/// Gaussian noise, kept only when H p1 falls inside the second image.
/// Outliers have p1 and p2 drawn independently and uniformly. The
/// correspondence order is shuffled. Two-plane scenes are resampled until
/// the planes' homographies differ by more than 50 px corner error.
SyntheticScene synth_scene(const SyntheticSceneConfig& cfg);

}  // namespace pmatch
