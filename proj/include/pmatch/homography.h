#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "pmatch/error.h"

namespace pmatch {

template <typename T>
using Point2 = Eigen::Matrix<T, 2, 1>;
using Point2d = Point2<double>;

template <typename T>
using Matrix3 = Eigen::Matrix<T, 3, 3>;

/// Planar projective transform, stored with unit Frobenius norm and a fixed
/// sign (h22 >= 0, or the first nonzero entry of the last row positive when
/// h22 == 0). Two homographies that differ only by a nonzero scale normalize
/// to the same matrix.
template <typename T>
class Homography {
 public:
  using Matrix = Matrix3<T>;

  Homography() : h_(normalize(Matrix::Identity())) {}

  /// Normalizes `m`. Throws DegenerateConfiguration for non-finite or
  /// singular input.
  explicit Homography(const Matrix& m) : h_(normalize(m)) {
    if (!(std::abs(h_.determinant()) > T(1e-12))) {
      throw Error(ErrorCode::kDegenerateConfiguration,
                  "homography is singular");
    }
  }

  static Homography identity() { return Homography(); }

  const Matrix& matrix() const { return h_; }
  T operator()(int row, int col) const { return h_(row, col); }

  Homography inverse() const { return Homography(h_.inverse()); }

  /// Composition: (a * b) maps p to a(b(p)).
  Homography operator*(const Homography& other) const {
    return Homography(h_ * other.h_);
  }

  bool operator==(const Homography& other) const { return h_ == other.h_; }

  /// Scale/sign normalization. A matrix that is already normalized is
  /// returned unchanged, so the operation is bitwise idempotent.
  static Matrix normalize(const Matrix& m) {
    if (!m.allFinite()) {
      throw Error(ErrorCode::kDegenerateConfiguration,
                  "homography has non-finite entries");
    }
    const T norm = m.norm();
    if (!(norm > T(0))) {
      throw Error(ErrorCode::kDegenerateConfiguration, "homography is zero");
    }
    const T sign = sign_of_last_row(m);
    if (sign == T(0)) {
      throw Error(ErrorCode::kDegenerateConfiguration,
                  "homography has a zero last row");
    }
    const T eps = std::numeric_limits<T>::epsilon();
    if (sign > T(0) && std::abs(norm - T(1)) <= T(4) * eps) {
      return m;
    }
    return m * (sign / norm);
  }

 private:
  static T sign_of_last_row(const Matrix& m) {
    if (m(2, 2) != T(0)) return m(2, 2) > T(0) ? T(1) : T(-1);
    for (int c = 0; c < 2; ++c) {
      if (m(2, c) != T(0)) return m(2, c) > T(0) ? T(1) : T(-1);
    }
    return T(0);
  }

  Matrix h_;
};

using Homographyd = Homography<double>;

/// Applies `h` to `p` with homogeneous division. Throws PointAtInfinity when
/// the third homogeneous coordinate vanishes.
template <typename T>
Point2<T> project(const Homography<T>& h, const Point2<T>& p) {
  const Eigen::Matrix<T, 3, 1> v = h.matrix() * p.homogeneous();
  if (std::abs(v.z()) < T(1e-12)) {
    throw Error(ErrorCode::kPointAtInfinity, "point maps to infinity");
  }
  return v.hnormalized();
}

/// Forward transfer error |h(p1) - p2|, +inf when p1 maps to infinity.
template <typename T>
T transfer_error(const Homography<T>& h, const Point2<T>& p1,
                 const Point2<T>& p2) noexcept {
  const Eigen::Matrix<T, 3, 1> v = h.matrix() * p1.homogeneous();
  if (std::abs(v.z()) < T(1e-12)) return std::numeric_limits<T>::infinity();
  return (v.hnormalized() - p2).norm();
}

/// Mean displacement of the corners of the axis-aligned box [lo, hi] between
/// two homographies.
template <typename T>
T corner_error(const Homography<T>& h_est, const Homography<T>& h_gt,
               const Point2<T>& lo, const Point2<T>& hi) {
  const std::array<Point2<T>, 4> corners = {
      Point2<T>(lo.x(), lo.y()), Point2<T>(hi.x(), lo.y()),
      Point2<T>(hi.x(), hi.y()), Point2<T>(lo.x(), hi.y())};
  T sum = 0;
  for (const auto& c : corners) {
    sum += (project(h_est, c) - project(h_gt, c)).norm();
  }
  return sum / T(4);
}

/// Mean displacement of the four image corners between two homographies.
template <typename T>
T corner_error(const Homography<T>& h_est, const Homography<T>& h_gt, T width,
               T height) {
  return corner_error(h_est, h_gt, Point2<T>(0, 0), Point2<T>(width, height));
}

namespace internal {

/// Similarity that moves the centroid of `pts` to the origin and makes the
/// mean distance to it sqrt(2).
template <typename T>
Matrix3<T> hartley_normalization(std::span<const Point2<T>> pts) {
  Point2<T> centroid = Point2<T>::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= T(pts.size());
  T mean_dist = 0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= T(pts.size());
  if (!(mean_dist > T(0))) {
    throw Error(ErrorCode::kDegenerateConfiguration, "coincident points");
  }
  const T s = std::sqrt(T(2)) / mean_dist;
  Matrix3<T> t;
  t << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return t;
}

template <typename T>
T bbox_diagonal_sq(std::span<const Point2<T>> pts) {
  Point2<T> lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).squaredNorm();
}

template <typename T>
bool has_collinear_triple(std::span<const Point2<T>> pts, T eps_area) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Point2<T> u = pts[j] - pts[i];
        const Point2<T> v = pts[k] - pts[i];
        if (std::abs(u.x() * v.y() - u.y() * v.x()) <= eps_area) return true;
      }
  return false;
}

// True when every point lies on one line, judged on the normalized cloud.
template <typename T>
bool all_collinear(std::span<const Point2<T>> pts, const Matrix3<T>& norm) {
  Eigen::Matrix<T, 2, 2> scatter = Eigen::Matrix<T, 2, 2>::Zero();
  for (const auto& p : pts) {
    const Point2<T> q = (norm * p.homogeneous()).template head<2>();
    scatter += q * q.transpose();
  }
  scatter /= T(pts.size());
  // Mean squared radius is 2 after normalization; trace ~ 2.
  const T det = scatter.determinant();
  return det <= T(1e-9) * scatter.trace() * scatter.trace();
}

}  // namespace internal

/// Normalized DLT. Hartley-normalizes both point sets, takes the right
/// singular vector of the smallest singular value of the 2n x 9 system and
/// maps it back to pixel coordinates.
///
/// Throws DegenerateConfiguration for coincident or collinear inputs (for
/// n == 4 any collinear triple is rejected) and RankDeficient when the
/// system has more than a one-dimensional null space.
template <typename T>
Homography<T> estimate_homography(std::span<const Point2<T>> src,
                                  std::span<const Point2<T>> dst) {
  const std::size_t n = src.size();
  if (n < 4 || dst.size() != n) {
    throw Error(ErrorCode::kInsufficientData,
                "homography estimation needs at least 4 point pairs");
  }
  const Matrix3<T> t_src = internal::hartley_normalization(src);
  const Matrix3<T> t_dst = internal::hartley_normalization(dst);
  if (n == 4) {
    const T eps_src = T(1e-9) * internal::bbox_diagonal_sq(src);
    const T eps_dst = T(1e-9) * internal::bbox_diagonal_sq(dst);
    if (internal::has_collinear_triple(src, eps_src) ||
        internal::has_collinear_triple(dst, eps_dst)) {
      throw Error(ErrorCode::kDegenerateConfiguration,
                  "three of four points are collinear");
    }
  } else if (internal::all_collinear(src, t_src) ||
             internal::all_collinear(dst, t_dst)) {
    throw Error(ErrorCode::kDegenerateConfiguration, "points are collinear");
  }

  Eigen::Matrix<T, Eigen::Dynamic, 9> a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2<T> p = (t_src * src[i].homogeneous()).template head<2>();
    const Point2<T> q = (t_dst * dst[i].homogeneous()).template head<2>();
    const T x = p.x(), y = p.y(), u = q.x(), v = q.y();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }
  Eigen::JacobiSVD<Eigen::Matrix<T, Eigen::Dynamic, 9>> svd(a,
                                                            Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(7) > T(1e-10) * sv(0))) {
    throw Error(ErrorCode::kRankDeficient,
                "homography system has a degenerate null space");
  }
  const Eigen::Matrix<T, 9, 1> h = svd.matrixV().col(8);
  Matrix3<T> hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography<T>(t_dst.inverse() * hn * t_src);
}

template <typename T>
Homography<T> estimate_homography(const std::vector<Point2<T>>& src,
                                  const std::vector<Point2<T>>& dst) {
  return estimate_homography(std::span<const Point2<T>>(src),
                             std::span<const Point2<T>>(dst));
}

}  // namespace pmatch
