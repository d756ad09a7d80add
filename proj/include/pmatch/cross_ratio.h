#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Core>

#include "pmatch/error.h"
#include "pmatch/homography.h"

namespace pmatch {

template <typename T>
using Pentagon = std::array<Point2<T>, 5>;

/// z-component of the 2D cross product.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar cross2(const Eigen::MatrixBase<DerivedU>& u,
                                 const Eigen::MatrixBase<DerivedV>& v) {
  return u.x() * v.y() - u.y() * v.x();
}

/// Degeneracy tolerance for cross products of position vectors: 1e-9 times
/// the squared bounding-box diagonal of the points involved.
template <typename T, std::size_t N>
T eps_cross(const std::array<Point2<T>, N>& pts) {
  Point2<T> lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return T(1e-9) * (hi - lo).squaredNorm();
}

namespace internal {

template <typename T>
T cross_ratio_with_eps(const Point2<T>& o, const Point2<T>& a,
                       const Point2<T>& b, const Point2<T>& c,
                       const Point2<T>& d, T eps) {
  const Point2<T> va = a - o, vb = b - o, vc = c - o, vd = d - o;
  const T ac = std::abs(cross2(va, vc));
  const T bd = std::abs(cross2(vb, vd));
  const T bc = std::abs(cross2(vb, vc));
  const T ad = std::abs(cross2(va, vd));
  if (!(ac > eps && bd > eps && bc > eps && ad > eps)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "three points collinear through the cross-ratio origin");
  }
  return (ac * bd) / (bc * ad);
}

}  // namespace internal

/// Cross-ratio of the pencil of lines from `origin` through a, b, c, d:
///   |a x c| |b x d| / (|b x c| |a x d|)
/// with every vector taken relative to `origin`.
template <typename T>
T cross_ratio(const Point2<T>& origin, const Point2<T>& a, const Point2<T>& b,
              const Point2<T>& c, const Point2<T>& d) {
  const std::array<Point2<T>, 5> pts = {origin, a, b, c, d};
  return internal::cross_ratio_with_eps(origin, a, b, c, d, eps_cross(pts));
}

/// Five cross-ratios of a pentagon, one per vertex used as origin, plus the
/// orientation of all ten vertex triples.
template <typename T>
struct CrossRatioSignature {
  std::array<T, 5> cr{};
  /// Bit k is set when the k-th triple (lexicographic over i<j<l) is
  /// counter-clockwise. Every signed cross product in the signature is
  /// plus or minus one of these orientations.
  std::uint16_t orientation = 0;
};

using CrossRatioSignatured = CrossRatioSignature<double>;

/// Smallest |(q - p) x (r - p)| over the ten vertex triples.
template <typename T>
T min_triple_area(const Pentagon<T>& pts) {
  T best = std::numeric_limits<T>::infinity();
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int l = j + 1; l < 5; ++l) {
        best = std::min(best,
                        std::abs(cross2(pts[j] - pts[i], pts[l] - pts[i])));
      }
  return best;
}

/// A pentagon is usable when no three of its vertices are collinear (within
/// eps_cross), which also rules out coincident vertices.
template <typename T>
bool is_nondegenerate(const Pentagon<T>& pts) {
  return min_triple_area(pts) > eps_cross(pts);
}

template <typename T>
std::uint16_t triple_orientation(const Pentagon<T>& pts) {
  std::uint16_t mask = 0;
  int bit = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int l = j + 1; l < 5; ++l, ++bit) {
        if (cross2(pts[j] - pts[i], pts[l] - pts[i]) > T(0)) {
          mask = static_cast<std::uint16_t>(mask | (1u << bit));
        }
      }
  return mask;
}

/// Signature of a pentagon given in matched vertex order. cr[i] uses vertex i
/// as origin and vertices i+1, i+2, i+3, i+4 (mod 5) as a, b, c, d, so a
/// cyclic relabelling permutes the entries.
/// Throws DegenerateConfiguration if any three vertices are collinear.
template <typename T>
CrossRatioSignature<T> cr_signature(const Pentagon<T>& pts) {
  const T eps = eps_cross(pts);
  if (!(min_triple_area(pts) > eps)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "pentagon has three collinear vertices");
  }
  CrossRatioSignature<T> sig;
  for (int i = 0; i < 5; ++i) {
    sig.cr[i] = internal::cross_ratio_with_eps(
        pts[i], pts[(i + 1) % 5], pts[(i + 2) % 5], pts[(i + 3) % 5],
        pts[(i + 4) % 5], eps);
  }
  sig.orientation = triple_orientation(pts);
  return sig;
}

/// |cr - cr'| / |cr + cr'| <= cr_th.
template <typename T>
bool cr_pair_matches(T cr, T cr_prime, T cr_th) {
  return std::abs(cr - cr_prime) <= cr_th * std::abs(cr + cr_prime);
}

/// Orientation patterns agree up to a global mirror.
inline bool orientation_compatible(std::uint16_t a, std::uint16_t b) {
  constexpr std::uint16_t kAll = (1u << 10) - 1;
  return a == b || a == static_cast<std::uint16_t>(~b & kAll);
}

/// All five cross-ratio pairs pass the relative-difference test and the
/// orientation patterns are compatible.
template <typename T>
bool signatures_match(const CrossRatioSignature<T>& s1,
                      const CrossRatioSignature<T>& s2, T cr_th) {
  if (!orientation_compatible(s1.orientation, s2.orientation)) return false;
  for (int i = 0; i < 5; ++i) {
    if (!cr_pair_matches(s1.cr[i], s2.cr[i], cr_th)) return false;
  }
  return true;
}

}  // namespace pmatch
