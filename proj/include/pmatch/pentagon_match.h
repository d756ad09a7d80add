#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmatch/correspondence.h"
#include "pmatch/cross_ratio.h"

namespace pmatch {

using Pentagond = Pentagon<double>;

/// Axis-aligned region of the first image, closed on all sides.
struct Rect {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  bool contains(const Point2d& p) const {
    return p.x() >= x && p.x() <= x + width && p.y() >= y &&
           p.y() <= y + height;
  }
};

struct MatchConfig {
  int grid_n = 3;
  double cr_th = 0.05;
  /// Candidate draws per block.
  int k_p = 1000;
  int pentagons_per_block = 1;
  /// Minimum pairwise vertex distance in the first image (px).
  double min_vertex_separation = 5.0;
  std::uint64_t seed = 0;
  /// Restricts sampling to a sub-region of the first image; the grid then
  /// partitions this region instead of the full frame.
  std::optional<Rect> roi;
  /// Worker threads for per-block sampling. Output does not depend on it.
  int threads = 1;

  void validate() const;
};

struct BlockIndex {
  int row = 0;
  int col = 0;
  bool operator==(const BlockIndex&) const = default;
};

/// Five correspondences whose quintets in both images share a cross-ratio
/// signature. `indices` is ascending; vertex i of each quintet is
/// correspondence indices[i].
struct PentagonPair {
  std::array<std::size_t, 5> indices{};
  CrossRatioSignatured sig1;
  CrossRatioSignatured sig2;
  BlockIndex block;
};

/// N x N partition of a region of the first image. Cell (row, col) covers
/// [x0 + col*w/n, x0 + (col+1)*w/n) x [y0 + row*h/n, y0 + (row+1)*h/n), with
/// the last row and column closed on their outer edge.
struct Grid {
  int n = 1;
  Rect region;
  /// Row-major, n*n cells of correspondence indices (ascending).
  std::vector<std::vector<std::size_t>> cells;

  const std::vector<std::size_t>& cell(int row, int col) const {
    return cells[static_cast<std::size_t>(row * n + col)];
  }
};

/// Assigns every correspondence whose p1 lies inside the image to exactly
/// one block. Correspondences outside [0,w] x [0,h] are left unassigned.
Grid partition(const CorrespondenceSet& corrs, double width, double height,
               int n);
Grid partition(const CorrespondenceSet& corrs, const Rect& region, int n);

enum class Image { kFirst, kSecond };

Pentagond gather_pentagon(const CorrespondenceSet& corrs,
                          const std::array<std::size_t, 5>& indices,
                          Image image);

enum class ShapeMatch { kMatch, kMismatch, kDegenerate };

ShapeMatch shape_match_outcome(const Pentagond& pts1, const Pentagond& pts2,
                               double cr_th);

/// True iff all five cross-ratio pairs agree within cr_th and the vertex
/// triple orientations agree up to a global mirror. Degenerate quintets are
/// reported as non-matching.
bool pentagon_shape_match(const Pentagond& pts1, const Pentagond& pts2,
                          double cr_th);

struct BlockReport {
  BlockIndex block;
  std::size_t candidates = 0;
  int draws = 0;
  int successes = 0;
  /// Draws rejected by the vertex-separation screen.
  int too_close = 0;
  /// Draws rejected as degenerate in either image.
  int degenerate = 0;
  /// Fewer than five correspondences in the block.
  bool skipped = false;
};

struct PentagonSearch {
  std::vector<PentagonPair> pentagons;
  std::vector<BlockReport> blocks;
};

/// Per-block random pentagon sampling. Each block draws up to k_p uniform
/// 5-subsets from its own generator stream, derived from (seed, row, col),
/// and keeps the first pentagons_per_block distinct matches. Pentagons are
/// returned in row-major block order. Never throws for an empty result.
PentagonSearch search_pentagons(const CorrespondenceSet& corrs, double width,
                                double height, const MatchConfig& cfg);

/// As search_pentagons, but throws NoPentagonFound when no block yields a
/// match.
std::vector<PentagonPair> find_matched_pentagons(const CorrespondenceSet& corrs,
                                                 double width, double height,
                                                 const MatchConfig& cfg);

}  // namespace pmatch
