#include "pmatch/ransac.h"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <thread>

#include "pmatch/error.h"
#include "pmatch/planar_merge.h"
#include "pmatch/random.h"

namespace pmatch {

void RansacConfig::validate() const {
  if (!(e_t > 0)) throw Error(ErrorCode::kInvalidArgument, "e_t must be positive");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (sample_size != 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "homography RANSAC uses minimal samples of 4");
  }
}

namespace {

struct Hypothesis {
  int iteration = -1;
  std::size_t score = 0;
  double mean_error = std::numeric_limits<double>::infinity();
  std::optional<Homographyd> h;

  // Higher score wins; ties go to the earlier iteration.
  bool better_than(const Hypothesis& o) const {
    if (!h) return false;
    if (!o.h) return true;
    if (score != o.score) return score > o.score;
    return iteration < o.iteration;
  }
};

std::array<std::size_t, 4> draw_sample(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::array<std::size_t, 4> s{};
  for (int i = 0; i < 4; ++i) {
    bool fresh;
    do {
      s[i] = pick(rng);
      fresh = std::find(s.begin(), s.begin() + i, s[i]) == s.begin() + i;
    } while (!fresh);
  }
  return s;
}

std::optional<Homographyd> minimal_model(const CorrespondenceSet& corrs,
                                         const std::array<std::size_t, 4>& s) {
  std::array<Point2d, 4> src, dst;
  for (int i = 0; i < 4; ++i) {
    src[i] = corrs[s[i]].p1;
    dst[i] = corrs[s[i]].p2;
  }
  try {
    return estimate_homography(std::span<const Point2d>(src),
                               std::span<const Point2d>(dst));
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Inlier count at e_t and mean error over all correspondences.
std::pair<std::size_t, double> score(const Homographyd& h,
                                     const CorrespondenceSet& corrs, double e_t) {
  std::size_t inliers = 0;
  double total = 0;
  for (const auto& c : corrs) {
    const double e = transfer_error(h, c.p1, c.p2);
    if (e <= e_t) ++inliers;
    total += e;
  }
  return {inliers, total / static_cast<double>(corrs.size())};
}

Hypothesis run_iteration(const CorrespondenceSet& corrs, const RansacConfig& cfg,
                         int i) {
  Hypothesis hyp;
  hyp.iteration = i;
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(i)});
  hyp.h = minimal_model(corrs, draw_sample(rng, corrs.size()));
  if (hyp.h) std::tie(hyp.score, hyp.mean_error) = score(*hyp.h, corrs, cfg.e_t);
  return hyp;
}

void fill_inliers(const CorrespondenceSet& corrs, double e_t, RansacResult* r) {
  r->inliers.clear();
  double sum = 0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const double e = transfer_error(r->homography, corrs[i].p1, corrs[i].p2);
    if (e <= e_t) {
      r->inliers.push_back(i);
      sum += e;
    }
  }
  r->mean_inlier_error =
      r->inliers.empty() ? 0.0 : sum / static_cast<double>(r->inliers.size());
}

}  // namespace

RansacResult ransac_homography(const CorrespondenceSet& corrs,
                               const RansacConfig& cfg) {
  cfg.validate();
  if (corrs.size() < 4) {
    throw Error(ErrorCode::kInsufficientData,
                "RANSAC needs at least 4 correspondences");
  }
  RansacResult result;

  if (cfg.literal) {
    // First minimal model whose mean error over every correspondence is
    // below e_t; no refit.
    for (int i = 0; i < cfg.k; ++i) {
      const Hypothesis hyp = run_iteration(corrs, cfg, i);
      result.iterations = i + 1;
      if (hyp.h && hyp.mean_error < cfg.e_t) {
        result.success = true;
        result.homography = *hyp.h;
        result.best_iteration = i;
        fill_inliers(corrs, cfg.e_t, &result);
        return result;
      }
    }
    return result;
  }

  const int threads = std::clamp(cfg.threads, 1, cfg.k);
  std::vector<Hypothesis> best(static_cast<std::size_t>(threads));
  const auto worker = [&](int t) {
    for (int i = t; i < cfg.k; i += threads) {
      Hypothesis hyp = run_iteration(corrs, cfg, i);
      if (hyp.better_than(best[static_cast<std::size_t>(t)])) {
        best[static_cast<std::size_t>(t)] = std::move(hyp);
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  Hypothesis winner;
  for (auto& b : best) {
    if (b.better_than(winner)) winner = std::move(b);
  }
  result.iterations = cfg.k;

  // A model must explain at least four correspondences beyond its sample.
  if (!winner.h || winner.score < 8) return result;
  result.success = true;
  result.best_iteration = winner.iteration;
  result.homography = *winner.h;
  fill_inliers(corrs, cfg.e_t, &result);

  if (cfg.refit) {
    result.homography = refine_homography(result.homography, corrs, cfg.e_t);
    fill_inliers(corrs, cfg.e_t, &result);
  }
  return result;
}

}  // namespace pmatch
