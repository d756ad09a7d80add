#include "pmatch/pentagon_match.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <string>
#include <thread>

#include "pmatch/error.h"
#include "pmatch/random.h"

namespace pmatch {

void MatchConfig::validate() const {
  if (grid_n < 1) throw Error(ErrorCode::kInvalidArgument, "grid_n must be >= 1");
  if (!(cr_th > 0.0 && cr_th < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cr_th must lie in (0, 1)");
  }
  if (k_p < 1) throw Error(ErrorCode::kInvalidArgument, "k_p must be >= 1");
  if (pentagons_per_block < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "pentagons_per_block must be >= 1");
  }
  if (!(min_vertex_separation >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_vertex_separation must be >= 0");
  }
  if (roi && !(roi->width > 0 && roi->height > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "roi must have positive size");
  }
}

Grid partition(const CorrespondenceSet& corrs, const Rect& region, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "grid size must be >= 1");
  if (!(region.width > 0 && region.height > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "region must have positive size");
  }
  Grid grid;
  grid.n = n;
  grid.region = region;
  grid.cells.resize(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const Point2d& p = corrs[i].p1;
    if (!region.contains(p)) continue;
    const auto cell_of = [n](double offset, double extent) {
      const int c = static_cast<int>(std::floor(offset * n / extent));
      return std::clamp(c, 0, n - 1);
    };
    const int col = cell_of(p.x() - region.x, region.width);
    const int row = cell_of(p.y() - region.y, region.height);
    grid.cells[static_cast<std::size_t>(row * n + col)].push_back(i);
  }
  return grid;
}

Grid partition(const CorrespondenceSet& corrs, double width, double height,
               int n) {
  return partition(corrs, Rect{0, 0, width, height}, n);
}

Pentagond gather_pentagon(const CorrespondenceSet& corrs,
                          const std::array<std::size_t, 5>& indices,
                          Image image) {
  Pentagond pts;
  for (int i = 0; i < 5; ++i) {
    const auto& c = corrs[indices[i]];
    pts[i] = image == Image::kFirst ? c.p1 : c.p2;
  }
  return pts;
}

ShapeMatch shape_match_outcome(const Pentagond& pts1, const Pentagond& pts2,
                               double cr_th) {
  if (!is_nondegenerate(pts1) || !is_nondegenerate(pts2)) {
    return ShapeMatch::kDegenerate;
  }
  try {
    const auto s1 = cr_signature(pts1);
    const auto s2 = cr_signature(pts2);
    return signatures_match(s1, s2, cr_th) ? ShapeMatch::kMatch
                                           : ShapeMatch::kMismatch;
  } catch (const Error&) {
    return ShapeMatch::kDegenerate;
  }
}

bool pentagon_shape_match(const Pentagond& pts1, const Pentagond& pts2,
                          double cr_th) {
  return shape_match_outcome(pts1, pts2, cr_th) == ShapeMatch::kMatch;
}

namespace {

bool well_separated(const Pentagond& pts, double min_sep) {
  const double min_sq = min_sep * min_sep;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      if ((pts[i] - pts[j]).squaredNorm() < min_sq) return false;
    }
  return true;
}

struct BlockOutcome {
  BlockReport report;
  std::vector<PentagonPair> pentagons;
};

BlockOutcome search_block(const CorrespondenceSet& corrs,
                          const std::vector<std::size_t>& members,
                          BlockIndex block, const MatchConfig& cfg) {
  BlockOutcome out;
  out.report.block = block;
  out.report.candidates = members.size();
  if (members.size() < 5) {
    out.report.skipped = true;
    return out;
  }
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(block.row),
                                static_cast<std::uint64_t>(block.col)});
  std::vector<std::size_t> pool = members;
  std::set<std::array<std::size_t, 5>> seen;
  const std::size_t n = pool.size();
  while (out.report.draws < cfg.k_p &&
         out.report.successes < cfg.pentagons_per_block) {
    ++out.report.draws;
    // Partial Fisher-Yates: the first five slots become a uniform 5-subset.
    for (std::size_t i = 0; i < 5; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::array<std::size_t, 5> idx;
    std::copy_n(pool.begin(), 5, idx.begin());
    std::sort(idx.begin(), idx.end());

    const Pentagond pts1 = gather_pentagon(corrs, idx, Image::kFirst);
    if (!well_separated(pts1, cfg.min_vertex_separation)) {
      ++out.report.too_close;
      continue;
    }
    const Pentagond pts2 = gather_pentagon(corrs, idx, Image::kSecond);
    if (!is_nondegenerate(pts1) || !is_nondegenerate(pts2)) {
      ++out.report.degenerate;
      continue;
    }
    const auto s1 = cr_signature(pts1);
    const auto s2 = cr_signature(pts2);
    if (!signatures_match(s1, s2, cfg.cr_th)) continue;
    if (!seen.insert(idx).second) continue;
    ++out.report.successes;
    out.pentagons.push_back(PentagonPair{idx, s1, s2, block});
  }
  return out;
}

}  // namespace

PentagonSearch search_pentagons(const CorrespondenceSet& corrs, double width,
                                double height, const MatchConfig& cfg) {
  cfg.validate();
  if (!(width > 0 && height > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  const Grid grid = cfg.roi ? partition(corrs, *cfg.roi, cfg.grid_n)
                            : partition(corrs, width, height, cfg.grid_n);
  const int n_blocks = cfg.grid_n * cfg.grid_n;
  std::vector<BlockOutcome> outcomes(static_cast<std::size_t>(n_blocks));
  const auto run = [&](int b) {
    const BlockIndex block{b / cfg.grid_n, b % cfg.grid_n};
    outcomes[static_cast<std::size_t>(b)] =
        search_block(corrs, grid.cells[static_cast<std::size_t>(b)], block, cfg);
  };

  const int threads = std::clamp(cfg.threads, 1, n_blocks);
  if (threads == 1) {
    for (int b = 0; b < n_blocks; ++b) run(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (int b = next++; b < n_blocks; b = next++) run(b);
      });
    }
    for (auto& w : workers) w.join();
  }

  PentagonSearch result;
  for (auto& o : outcomes) {
    result.blocks.push_back(o.report);
    for (auto& p : o.pentagons) result.pentagons.push_back(std::move(p));
  }
  return result;
}

std::vector<PentagonPair> find_matched_pentagons(const CorrespondenceSet& corrs,
                                                 double width, double height,
                                                 const MatchConfig& cfg) {
  if (corrs.size() < 5) {
    throw Error(ErrorCode::kNoPentagonFound,
                "need at least 5 correspondences");
  }
  PentagonSearch search = search_pentagons(corrs, width, height, cfg);
  if (search.pentagons.empty()) {
    int skipped = 0;
    for (const auto& b : search.blocks) skipped += b.skipped ? 1 : 0;
    throw Error(ErrorCode::kNoPentagonFound,
                "no matched pentagon within budget (" + std::to_string(skipped) +
                    " of " + std::to_string(search.blocks.size()) +
                    " blocks had fewer than 5 correspondences)");
  }
  return std::move(search.pentagons);
}

}  // namespace pmatch
