#include "pmatch/planar_merge.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "pmatch/error.h"
#include "pmatch/hull.h"
#include "pmatch/random.h"

namespace pmatch {

void MergeConfig::validate() const {
  if (!(cr_th > 0.0 && cr_th < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cr_th must lie in (0, 1)");
  }
  if (merge_trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "merge_trials must be >= 1");
  }
  if (min_support < 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_support must be >= 0");
  }
  if (!(inlier_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "inlier_tol must be positive");
  }
}

Homographyd fit_homography(const CorrespondenceSet& corrs,
                           const std::vector<std::size_t>& ids) {
  std::vector<Point2d> src, dst;
  src.reserve(ids.size());
  dst.reserve(ids.size());
  for (std::size_t id : ids) {
    src.push_back(corrs[id].p1);
    dst.push_back(corrs[id].p2);
  }
  return estimate_homography(src, dst);
}

double truncated_cost(const Homographyd& h, const CorrespondenceSet& corrs,
                      double tol) {
  const double cap = tol * tol;
  double cost = 0;
  for (const auto& c : corrs) {
    const double e = transfer_error(h, c.p1, c.p2);
    cost += std::isfinite(e) ? std::min(e * e, cap) : cap;
  }
  return cost;
}

Homographyd refine_homography(const Homographyd& h, const CorrespondenceSet& corrs,
                              double tol, const std::vector<bool>* eligible,
                              int max_rounds) {
  Homographyd best = h;
  double best_cost = truncated_cost(h, corrs, tol);
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      if (eligible && !(*eligible)[i]) continue;
      if (transfer_error(best, corrs[i].p1, corrs[i].p2) <= tol) ids.push_back(i);
    }
    if (ids.size() < 5) break;
    Homographyd next;
    try {
      next = fit_homography(corrs, ids);
    } catch (const Error&) {
      break;
    }
    const double cost = truncated_cost(next, corrs, tol);
    if (!(cost < best_cost)) break;
    best = next;
    best_cost = cost;
  }
  return best;
}

namespace {

std::uint64_t hash_indices(const std::array<std::size_t, 5>& idx) {
  std::uint64_t h = 0x84222325cbf29ce4ull;
  for (std::size_t i : idx) h = mix64(h ^ static_cast<std::uint64_t>(i));
  return h;
}

// Mixed pentagon from `take_a` positions of pa and the rest of pb. Returns
// false when the two pentagons share vertices and the union is short.
bool mixed_pentagon(const PentagonPair& pa, const PentagonPair& pb,
                    const std::array<bool, 5>& take_a,
                    std::array<std::size_t, 5>* out) {
  std::array<std::size_t, 5> idx;
  for (int i = 0; i < 5; ++i) idx[i] = take_a[i] ? pa.indices[i] : pb.indices[i];
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return false;
  *out = idx;
  return true;
}

bool mixed_pair_matches(const PentagonPair& pa, const PentagonPair& pb,
                        const std::array<bool, 5>& take_a,
                        const CorrespondenceSet& corrs, double cr_th) {
  std::array<std::size_t, 5> idx;
  if (!mixed_pentagon(pa, pb, take_a, &idx)) return false;
  return pentagon_shape_match(gather_pentagon(corrs, idx, Image::kFirst),
                              gather_pentagon(corrs, idx, Image::kSecond),
                              cr_th);
}

std::size_t count_support(const Homographyd& h, const CorrespondenceSet& corrs,
                          double tol) {
  std::size_t n = 0;
  for (const auto& c : corrs) {
    if (transfer_error(h, c.p1, c.p2) <= tol) ++n;
  }
  return n;
}

struct Cluster {
  std::vector<std::size_t> members;
  std::vector<std::size_t> vertex_ids;
  Homographyd vertex_h;
  std::size_t vertex_support = 0;
};

}  // namespace

bool cross_merge_test(const PentagonPair& pa, const PentagonPair& pb,
                      const CorrespondenceSet& corrs, const MergeConfig& cfg) {
  // Canonical order keeps the test symmetric and independent of list order.
  const PentagonPair* first = &pa;
  const PentagonPair* second = &pb;
  if (pb.indices < pa.indices) std::swap(first, second);
  Rng rng = make_rng(cfg.seed,
                     {hash_indices(first->indices), hash_indices(second->indices)});

  std::array<int, 5> order = {0, 1, 2, 3, 4};
  for (int trial = 0; trial < cfg.merge_trials; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    std::array<bool, 5> take_a{};
    for (int i = 0; i < 3; ++i) take_a[order[i]] = true;
    std::array<bool, 5> take_b;
    for (int i = 0; i < 5; ++i) take_b[i] = !take_a[i];
    if (mixed_pair_matches(*first, *second, take_a, corrs, cfg.cr_th) &&
        mixed_pair_matches(*first, *second, take_b, corrs, cfg.cr_th)) {
      return true;
    }
  }
  return false;
}

GroupingResult group_pentagons(const std::vector<PentagonPair>& pentagons,
                               const CorrespondenceSet& corrs, double width,
                               double height, const MergeConfig& cfg) {
  cfg.validate();
  if (!(width > 0 && height > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  GroupingResult result;
  const std::size_t n = pentagons.size();

  std::map<std::pair<std::size_t, std::size_t>, bool> cache;
  const auto merges = [&](std::size_t a, std::size_t b) {
    const auto key = std::minmax(a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const bool ok = cross_merge_test(pentagons[a], pentagons[b], corrs, cfg);
    cache.emplace(key, ok);
    return ok;
  };

  // Agglomeration: grow each group to a fixpoint, then seed the next one.
  std::vector<bool> assigned(n, false);
  std::vector<Cluster> clusters;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (assigned[seed]) continue;
    assigned[seed] = true;
    Cluster cl;
    cl.members.push_back(seed);
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t q = 0; q < n; ++q) {
        if (assigned[q]) continue;
        const bool joins = std::any_of(cl.members.begin(), cl.members.end(),
                                       [&](std::size_t m) { return merges(m, q); });
        if (joins) {
          assigned[q] = true;
          cl.members.push_back(q);
          grew = true;
        }
      }
    }
    std::sort(cl.members.begin(), cl.members.end());
    clusters.push_back(std::move(cl));
  }

  std::vector<Cluster> kept;
  for (auto& cl : clusters) {
    for (std::size_t m : cl.members) {
      const auto& idx = pentagons[m].indices;
      cl.vertex_ids.insert(cl.vertex_ids.end(), idx.begin(), idx.end());
    }
    std::sort(cl.vertex_ids.begin(), cl.vertex_ids.end());
    cl.vertex_ids.erase(std::unique(cl.vertex_ids.begin(), cl.vertex_ids.end()),
                        cl.vertex_ids.end());
    try {
      cl.vertex_h = fit_homography(corrs, cl.vertex_ids);
    } catch (const Error&) {
      result.discarded.insert(result.discarded.end(), cl.members.begin(),
                              cl.members.end());
      continue;
    }
    cl.vertex_support = count_support(cl.vertex_h, corrs, cfg.inlier_tol);
    // A lone pentagon that merges with nothing and explains few
    // correspondences besides its own vertices is taken as an erroneous
    // match. Its five vertices fit almost exactly whenever the shape test
    // passed, so they say nothing about the match.
    std::size_t own = 0;
    for (std::size_t id : cl.vertex_ids) {
      if (transfer_error(cl.vertex_h, corrs[id].p1, corrs[id].p2) <= cfg.inlier_tol) ++own;
    }
    if (cl.members.size() == 1 &&
        cl.vertex_support - own < static_cast<std::size_t>(cfg.min_support)) {
      result.discarded.push_back(cl.members.front());
      continue;
    }
    kept.push_back(std::move(cl));
  }
  std::sort(result.discarded.begin(), result.discarded.end());

  std::stable_sort(kept.begin(), kept.end(), [](const Cluster& a, const Cluster& b) {
    if (a.members.size() != b.members.size()) {
      return a.members.size() > b.members.size();
    }
    if (a.vertex_support != b.vertex_support) {
      return a.vertex_support > b.vertex_support;
    }
    return a.members.front() < b.members.front();
  });

  // Exclusive assignment for the refit: a correspondence that some group's
  // vertex fit explains within tolerance belongs to the group with the
  // smallest error (ties to the larger group) and is off limits to the rest.
  std::vector<std::size_t> owner(corrs.size(), kept.size());
  if (cfg.refit) {
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < kept.size(); ++g) {
        const double e = transfer_error(kept[g].vertex_h, corrs[i].p1, corrs[i].p2);
        if (e <= cfg.inlier_tol && e < best) {
          best = e;
          owner[i] = g;
        }
      }
    }
  }

  const double image_area = width * height;
  for (std::size_t g = 0; g < kept.size(); ++g) {
    Cluster& cl = kept[g];
    PlanarGroup group;
    group.pentagon_ids = cl.members;
    group.vertex_corr_ids = cl.vertex_ids;
    group.vertex_homography = cl.vertex_h;
    group.homography = cl.vertex_h;
    group.support = cl.vertex_support;
    if (cfg.refit) {
      std::vector<bool> eligible(corrs.size());
      for (std::size_t i = 0; i < corrs.size(); ++i) {
        eligible[i] = owner[i] == g || owner[i] == kept.size();
      }
      group.homography =
          refine_homography(cl.vertex_h, corrs, cfg.inlier_tol, &eligible);
      group.support = count_support(group.homography, corrs, cfg.inlier_tol);
    }
    std::vector<Point2d> hull_pts;
    hull_pts.reserve(cl.vertex_ids.size());
    for (std::size_t id : cl.vertex_ids) hull_pts.push_back(corrs[id].p1);
    group.hull_area_fraction =
        std::clamp(convex_hull_area(std::move(hull_pts)) / image_area, 0.0, 1.0);
    result.groups.push_back(std::move(group));
  }
  return result;
}

std::vector<PlanarGroup> build_planar_groups(
    const std::vector<PentagonPair>& pentagons, const CorrespondenceSet& corrs,
    double width, double height, const MergeConfig& cfg) {
  GroupingResult r = group_pentagons(pentagons, corrs, width, height, cfg);
  if (r.groups.empty()) {
    throw Error(ErrorCode::kNoGroupFound,
                "every matched pentagon was rejected as an erroneous match");
  }
  return std::move(r.groups);
}

}  // namespace pmatch
