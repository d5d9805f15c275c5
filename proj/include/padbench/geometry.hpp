#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "rng.hpp"

namespace padbench {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// A correspondence: `src` in image A maps to `dst` in image B.
struct PointPair {
  Point2 src;
  Point2 dst;
};

/// Projective 3x3 transform, scaled so that element (2, 2) is 1 whenever that
/// element is not vanishingly small.
class Homography {
 public:
  Homography() : m_(Eigen::Matrix3d::Identity()) {}

  explicit Homography(const Eigen::Matrix3d& m) : m_(m) {
    const double scale = m_.cwiseAbs().maxCoeff();
    if (std::abs(m_(2, 2)) > 1e-14 * scale) {
      m_ /= m_(2, 2);
    } else if (scale > 0.0) {
      m_ /= m_.norm();
    }
  }

  static Homography identity() { return Homography(); }

  static Homography translation(double tx, double ty) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 2) = tx;
    m(1, 2) = ty;
    return Homography(m);
  }

  const Eigen::Matrix3d& matrix() const noexcept { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }
  double determinant() const { return m_.determinant(); }

  bool invertible() const { return std::abs(determinant()) > 1e-12; }

  Homography inverse() const {
    if (!invertible()) {
      throw Error(ErrorCode::SingularHomography, "determinant magnitude <= 1e-12");
    }
    return Homography(m_.inverse());
  }

  /// this * other: apply `other` first.
  Homography compose(const Homography& other) const { return Homography(m_ * other.m_); }

 private:
  Eigen::Matrix3d m_;
};

/// Maps `p` through `h`: ((h1.p)/(h3.p), (h2.p)/(h3.p)).
inline Point2 project_point(const Homography& h, Point2 p) {
  const auto& m = h.matrix();
  const double u = m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2);
  const double v = m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2);
  const double w = m(2, 0) * p.x + m(2, 1) * p.y + m(2, 2);
  const double scale = std::abs(m(2, 0) * p.x) + std::abs(m(2, 1) * p.y) + std::abs(m(2, 2));
  if (!(std::abs(w) > 1e-14 * scale)) {
    throw Error(ErrorCode::PointAtInfinity, "point maps to infinity");
  }
  return {u / w, v / w};
}

namespace detail {

/// Similarity moving the centroid to the origin with mean distance sqrt(2).
inline Eigen::Matrix3d hartley_normalizer(std::span<const Point2> pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
  mean_dist /= static_cast<double>(pts.size());
  if (!(mean_dist > 0.0) || !std::isfinite(mean_dist)) {
    throw Error(ErrorCode::DegenerateConfiguration, "coincident points");
  }
  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0;
  return t;
}

inline double cross(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Points are assumed to be Hartley-normalized (unit-ish scale).
inline bool has_collinear_triple(std::span<const Point2> pts) {
  constexpr double kTol = 1e-9;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        if (std::abs(cross(pts[i], pts[j], pts[k])) < kTol) return true;
  return false;
}

inline bool all_collinear(std::span<const Point2> pts) {
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector2d v(p.x, p.y);
    scatter += v * v.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(scatter);
  return es.eigenvalues()(0) < 1e-12 * es.eigenvalues()(1);
}

inline std::vector<Point2> transformed(const Eigen::Matrix3d& t, std::span<const Point2> pts) {
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({t(0, 0) * p.x + t(0, 2), t(1, 1) * p.y + t(1, 2)});
  return out;
}

}  // namespace detail

/// Normalized DLT. Solves for the eigenvector of the smallest eigenvalue of
/// A^T A in Hartley-normalized coordinates, then undoes the normalization.
inline Homography estimate_homography_dlt(std::span<const PointPair> pairs) {
  if (pairs.size() < 4) {
    throw Error(ErrorCode::TooFewPairs, "need at least 4 point pairs, got " + std::to_string(pairs.size()));
  }
  std::vector<Point2> src, dst;
  src.reserve(pairs.size());
  dst.reserve(pairs.size());
  for (const auto& pp : pairs) {
    if (!std::isfinite(pp.src.x) || !std::isfinite(pp.src.y) || !std::isfinite(pp.dst.x) ||
        !std::isfinite(pp.dst.y)) {
      throw Error(ErrorCode::DegenerateConfiguration, "non-finite coordinate");
    }
    src.push_back(pp.src);
    dst.push_back(pp.dst);
  }

  const Eigen::Matrix3d t_src = detail::hartley_normalizer(src);
  const Eigen::Matrix3d t_dst = detail::hartley_normalizer(dst);
  const auto ns = detail::transformed(t_src, src);
  const auto nd = detail::transformed(t_dst, dst);

  const bool minimal = pairs.size() == 4;
  if ((minimal && (detail::has_collinear_triple(ns) || detail::has_collinear_triple(nd))) ||
      detail::all_collinear(ns) || detail::all_collinear(nd)) {
    throw Error(ErrorCode::DegenerateConfiguration, "collinear points");
  }

  using Matrix9d = Eigen::Matrix<double, 9, 9>;
  using Vector9d = Eigen::Matrix<double, 9, 1>;
  Matrix9d ata = Matrix9d::Zero();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = ns[i].x, y = ns[i].y, u = nd[i].x, v = nd[i].y;
    Vector9d r1, r2;
    r1 << -x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u;
    r2 << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
    ata.noalias() += r1 * r1.transpose();
    ata.noalias() += r2 * r2.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Matrix9d> es(ata);
  const auto& evals = es.eigenvalues();
  if (evals(1) <= 1e-12 * evals(8)) {
    throw Error(ErrorCode::DegenerateConfiguration, "solution space is not one-dimensional");
  }
  const Vector9d h = es.eigenvectors().col(0);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);

  const Homography result(t_dst.inverse() * hn * t_src);
  if (!result.invertible()) {
    throw Error(ErrorCode::DegenerateConfiguration, "estimated homography is singular");
  }
  return result;
}

/// d(dst, H src) + d(src, H^-1 dst); infinity when either projection fails.
inline double symmetric_transfer_error(const Homography& h, const Homography& h_inv,
                                       const PointPair& pp) {
  try {
    const Point2 fwd = project_point(h, pp.src);
    const Point2 bwd = project_point(h_inv, pp.dst);
    return std::hypot(fwd.x - pp.dst.x, fwd.y - pp.dst.y) +
           std::hypot(bwd.x - pp.src.x, bwd.y - pp.src.y);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

struct RansacParams {
  int iterations = 2000;
  double inlier_threshold = 3.0;
  std::uint64_t seed = 0;
};

struct RansacResult {
  Homography h;
  std::vector<bool> inliers;
  std::size_t inlier_count = 0;
};

namespace detail {

struct Consensus {
  std::vector<bool> flags;
  std::size_t count = 0;
  double total_error = 0.0;
};

inline Consensus evaluate(const Homography& h, std::span<const PointPair> pairs, double threshold) {
  Consensus c;
  c.flags.assign(pairs.size(), false);
  if (!h.invertible()) return c;
  const Homography h_inv = h.inverse();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double e = symmetric_transfer_error(h, h_inv, pairs[i]);
    if (e < threshold) {
      c.flags[i] = true;
      ++c.count;
      c.total_error += e;
    }
  }
  return c;
}

inline std::vector<PointPair> select(std::span<const PointPair> pairs, const std::vector<bool>& flags) {
  std::vector<PointPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (flags[i]) out.push_back(pairs[i]);
  return out;
}

}  // namespace detail

/// RANSAC over 4-point DLT hypotheses. The best hypothesis (most inliers,
/// ties to lower summed transfer error) is refit on its inliers. The inlier
/// flags come from the refit model unless that would lose inliers. Deterministic in seed.
inline RansacResult ransac_homography(std::span<const PointPair> pairs, const RansacParams& params) {
  if (pairs.size() < 4) {
    throw Error(ErrorCode::TooFewPairs, "need at least 4 matches, got " + std::to_string(pairs.size()));
  }
  if (params.iterations < 1 || !(params.inlier_threshold > 0.0)) {
    throw Error(ErrorCode::DegenerateConfiguration, "iterations must be >= 1 and threshold > 0");
  }

  SplitMix64 rng(params.seed);
  detail::Consensus best;
  bool have_best = false;
  std::array<std::size_t, 4> idx{};
  std::array<PointPair, 4> sample{};

  for (int it = 0; it < params.iterations; ++it) {
    for (std::size_t k = 0; k < 4; ++k) {
      bool fresh;
      do {
        idx[k] = static_cast<std::size_t>(rng.below(pairs.size()));
        fresh = std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx[k]) ==
                idx.begin() + static_cast<std::ptrdiff_t>(k);
      } while (!fresh);
      sample[k] = pairs[idx[k]];
    }
    Homography candidate;
    try {
      candidate = estimate_homography_dlt(sample);
    } catch (const Error&) {
      continue;
    }
    auto c = detail::evaluate(candidate, pairs, params.inlier_threshold);
    if (!have_best || c.count > best.count ||
        (c.count == best.count && c.total_error < best.total_error)) {
      best = std::move(c);
      have_best = true;
    }
  }

  if (!have_best || best.count < 4) {
    throw Error(ErrorCode::NoConsensus,
                "best hypothesis has " + std::to_string(have_best ? best.count : 0) + " inliers");
  }

  RansacResult result;
  const auto inlier_pairs = detail::select(pairs, best.flags);
  Homography refit;
  try {
    refit = estimate_homography_dlt(inlier_pairs);
  } catch (const Error&) {
    throw Error(ErrorCode::NoConsensus, "inlier set is degenerate");
  }
  auto rescored = detail::evaluate(refit, pairs, params.inlier_threshold);
  if (rescored.count >= best.count) {
    result.inliers = std::move(rescored.flags);
    result.inlier_count = rescored.count;
  } else {
    result.inliers = std::move(best.flags);
    result.inlier_count = best.count;
  }
  result.h = refit;
  return result;
}

}  // namespace padbench
