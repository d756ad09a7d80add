#include "pmatch/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmatch/error.h"

namespace pmatch {

void SyntheticSceneConfig::validate() const {
  if (!(width > 0 && height > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "scene size must be positive");
  }
  if (!(noise_sigma >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");
  }
  if (n_planes != 1 && n_planes != 2) {
    throw Error(ErrorCode::kInvalidArgument, "n_planes must be 1 or 2");
  }
  if (!(homography_magnitude >= 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "homography_magnitude must be >= 0");
  }
}

Matrix3<double> random_homography_matrix(Rng& rng, double width, double height,
                                         double magnitude) {
  constexpr double kPi = 3.14159265358979323846;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double angle = magnitude * (30.0 * kPi / 180.0) * unit(rng);
  std::uniform_real_distribution<double> scale(0.7, 1.4);
  const double sx = 1.0 + magnitude * (scale(rng) - 1.0);
  const double sy = 1.0 + magnitude * (scale(rng) - 1.0);
  const double px = magnitude * 1e-3 * unit(rng);
  const double py = magnitude * 1e-3 * unit(rng);
  const double tx = magnitude * 0.2 * width * unit(rng);
  const double ty = magnitude * 0.2 * width * unit(rng);

  const double c = std::cos(angle), s = std::sin(angle);
  Matrix3<double> core;
  core << c * sx, -s * sy, tx,  //
      s * sx, c * sy, ty,       //
      px, py, 1.0;
  // Centre the transform on the image so rotation and perspective act
  // around the middle of the frame.
  Matrix3<double> to_centre = Matrix3<double>::Identity();
  to_centre(0, 2) = -width / 2;
  to_centre(1, 2) = -height / 2;
  Matrix3<double> from_centre = Matrix3<double>::Identity();
  from_centre(0, 2) = width / 2;
  from_centre(1, 2) = height / 2;
  return from_centre * core * to_centre;
}

Rect plane_region(const SyntheticSceneConfig& cfg, int k) {
  if (cfg.n_planes == 1) return Rect{0, 0, cfg.width, cfg.height};
  const double half = cfg.width / 2;
  return k == 1 ? Rect{0, 0, half, cfg.height}
                : Rect{half, 0, cfg.width - half, cfg.height};
}

namespace {

bool inside(const Point2d& p, double w, double h) {
  return p.x() >= 0 && p.x() <= w && p.y() >= 0 && p.y() <= h;
}

}  // namespace

SyntheticScene synth_scene(const SyntheticSceneConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, {0x5ce7e}));
  SyntheticScene scene;

  for (int attempt = 0;; ++attempt) {
    scene.plane_homographies.clear();
    for (int k = 0; k < cfg.n_planes; ++k) {
      scene.plane_homographies.emplace_back(random_homography_matrix(
          rng, cfg.width, cfg.height, cfg.homography_magnitude));
    }
    if (cfg.n_planes == 1 || cfg.homography_magnitude == 0 || attempt >= 100) break;
    if (corner_error(scene.plane_homographies[0], scene.plane_homographies[1],
                     cfg.width, cfg.height) > 50.0) {
      break;
    }
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 1; k <= cfg.n_planes; ++k) {
    const Rect region = plane_region(cfg, k);
    const Homographyd& h = scene.plane_homographies[static_cast<std::size_t>(k - 1)];
    const std::size_t target =
        cfg.n_inliers / static_cast<std::size_t>(cfg.n_planes) +
        (k <= static_cast<int>(cfg.n_inliers % static_cast<std::size_t>(cfg.n_planes)) ? 1 : 0);
    std::uniform_real_distribution<double> ux(region.x, region.x + region.width);
    std::uniform_real_distribution<double> uy(region.y, region.y + region.height);
    std::size_t made = 0;
    // Reject points whose image leaves the second frame; bounded so that an
    // extreme transform cannot loop forever.
    for (std::size_t tries = 0; made < target && tries < 1000 * (target + 1); ++tries) {
      const Point2d p1(ux(rng), uy(rng));
      Point2d p2 = project(h, p1);
      if (!inside(p2, cfg.width, cfg.height)) continue;
      if (cfg.noise_sigma > 0) {
        p2 += cfg.noise_sigma * Point2d(noise(rng), noise(rng));
      }
      scene.corrs.push_back({p1, p2, std::nullopt});
      scene.labels.push_back(k);
      ++made;
    }
  }

  std::uniform_real_distribution<double> ux(0.0, cfg.width);
  std::uniform_real_distribution<double> uy(0.0, cfg.height);
  for (std::size_t i = 0; i < cfg.n_outliers; ++i) {
    const Point2d p1(ux(rng), uy(rng));
    const Point2d p2(ux(rng), uy(rng));
    scene.corrs.push_back({p1, p2, std::nullopt});
    scene.labels.push_back(0);
  }

  std::vector<std::size_t> order(scene.corrs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  CorrespondenceSet corrs;
  std::vector<int> labels;
  corrs.reserve(order.size());
  labels.reserve(order.size());
  for (std::size_t i : order) {
    corrs.push_back(scene.corrs[i]);
    labels.push_back(scene.labels[i]);
  }
  scene.corrs = std::move(corrs);
  scene.labels = std::move(labels);
  return scene;
}

}  // namespace pmatch
