#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <span>
#include <vector>

#include "brief_pattern.hpp"
#include "error.hpp"
#include "imaging.hpp"

namespace padbench {

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double response = 0.0;  ///< Harris measure, always > 0.
  double angle = 0.0;     ///< Intensity-centroid orientation in [0, 2*pi).
};

struct Descriptor256 {
  std::array<std::uint8_t, 32> bytes{};

  bool bit(std::size_t i) const { return (bytes[i / 8] >> (i % 8)) & 1U; }
  friend bool operator==(const Descriptor256&, const Descriptor256&) = default;
};

inline int hamming_distance(const Descriptor256& a, const Descriptor256& b) noexcept {
  int d = 0;
  for (std::size_t i = 0; i < 32; i += 8) {
    std::uint64_t wa, wb;
    std::memcpy(&wa, a.bytes.data() + i, 8);
    std::memcpy(&wb, b.bytes.data() + i, 8);
    d += std::popcount(wa ^ wb);
  }
  return d;
}

struct Match {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  int distance = 0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct FeatureParams {
  int fast_threshold = 20;
  std::size_t max_keypoints = 1000;
  int max_distance = 64;
  bool cross_check = true;
};

/// Keypoints keep this distance from every border so that both the
/// orientation patch and the rotated sampling pattern stay inside the image.
inline constexpr int kPatchBorder = 16;
inline constexpr int kOrientationRadius = 15;

namespace detail {

// Bresenham circle of radius 3, clockwise from 12 o'clock.
inline constexpr std::array<std::array<int, 2>, 16> kFastCircle = {{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
}};

/// FAST-9 segment test. Returns 0 if not a corner, otherwise the largest
/// minimum contrast over any qualifying 9-pixel arc.
inline int fast9_score(const ImageBuffer& gray, int x, int y, int threshold) {
  const int p = gray.at(x, y);
  std::array<int, 16> diff{};
  for (std::size_t i = 0; i < 16; ++i) {
    diff[i] = gray.at(x + kFastCircle[i][0], y + kFastCircle[i][1]) - p;
  }
  int best = 0;
  for (std::size_t start = 0; start < 16; ++start) {
    int min_bright = 255, min_dark = 255;
    for (std::size_t k = 0; k < 9; ++k) {
      const int d = diff[(start + k) % 16];
      min_bright = std::min(min_bright, d);
      min_dark = std::min(min_dark, -d);
    }
    if (min_bright > threshold) best = std::max(best, min_bright);
    if (min_dark > threshold) best = std::max(best, min_dark);
  }
  return best;
}

inline double harris_response(const ImageBuffer& gray, int x, int y) {
  constexpr int kHalf = 3;
  constexpr double kK = 0.04;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int dy = -kHalf; dy <= kHalf; ++dy) {
    for (int dx = -kHalf; dx <= kHalf; ++dx) {
      const int cx = x + dx, cy = y + dy;
      auto at = [&](int ox, int oy) { return static_cast<double>(gray.at(cx + ox, cy + oy)); };
      const double gx = (at(1, -1) + 2 * at(1, 0) + at(1, 1)) - (at(-1, -1) + 2 * at(-1, 0) + at(-1, 1));
      const double gy = (at(-1, 1) + 2 * at(0, 1) + at(1, 1)) - (at(-1, -1) + 2 * at(0, -1) + at(1, -1));
      sxx += gx * gx;
      syy += gy * gy;
      sxy += gx * gy;
    }
  }
  const double tr = sxx + syy;
  return sxx * syy - sxy * sxy - kK * tr * tr;
}

inline double intensity_centroid_angle(const ImageBuffer& gray, int x, int y) {
  double m10 = 0.0, m01 = 0.0;
  constexpr int r = kOrientationRadius;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > r * r) continue;
      const double v = gray.at(x + dx, y + dy);
      m10 += dx * v;
      m01 += dy * v;
    }
  }
  if (m10 == 0.0 && m01 == 0.0) return 0.0;
  double a = std::atan2(m01, m10);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a = 0.0;
  return a;
}

/// Separable Gaussian (sigma 2, radius 4) with replicated borders.
inline std::vector<float> smooth(const ImageBuffer& gray) {
  constexpr int kRadius = 4;
  constexpr double kSigma = 2.0;
  std::array<float, 2 * kRadius + 1> kernel{};
  double sum = 0.0;
  for (int i = -kRadius; i <= kRadius; ++i) sum += std::exp(-(i * i) / (2.0 * kSigma * kSigma));
  for (int i = -kRadius; i <= kRadius; ++i) {
    kernel[static_cast<std::size_t>(i + kRadius)] =
        static_cast<float>(std::exp(-(i * i) / (2.0 * kSigma * kSigma)) / sum);
  }
  const int w = static_cast<int>(gray.width()), h = static_cast<int>(gray.height());
  std::vector<float> tmp(static_cast<std::size_t>(w) * h), out(tmp.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.f;
      for (int k = -kRadius; k <= kRadius; ++k)
        acc += kernel[static_cast<std::size_t>(k + kRadius)] * gray.at(std::clamp(x + k, 0, w - 1), y);
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.f;
      for (int k = -kRadius; k <= kRadius; ++k)
        acc += kernel[static_cast<std::size_t>(k + kRadius)] *
               tmp[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

}  // namespace detail

/// FAST-9 corners with 3x3 non-maximum suppression on the segment-test score,
/// ranked by Harris response (k = 0.04, 7x7 window) and truncated to
/// `max_count`. Single scale.
inline std::vector<Keypoint> detect_keypoints(const ImageBuffer& gray, int threshold, std::size_t max_count) {
  if (gray.channels() != 1) return detect_keypoints(to_gray(gray), threshold, max_count);
  if (gray.width() < 32 || gray.height() < 32) {
    throw Error(ErrorCode::ImageTooSmall, "image must be at least 32x32");
  }
  threshold = std::clamp(threshold, 1, 255);
  const int w = static_cast<int>(gray.width()), h = static_cast<int>(gray.height());
  std::vector<int> score(static_cast<std::size_t>(w) * h, 0);
  // Scores are computed one pixel beyond the keypoint area so NMS sees real neighbors.
  const int lo = kPatchBorder - 1;
  for (int y = lo; y < h - lo; ++y)
    for (int x = lo; x < w - lo; ++x) score[static_cast<std::size_t>(y) * w + x] = detail::fast9_score(gray, x, y, threshold);

  std::vector<Keypoint> kps;
  for (int y = kPatchBorder; y < h - kPatchBorder; ++y) {
    for (int x = kPatchBorder; x < w - kPatchBorder; ++x) {
      const int s = score[static_cast<std::size_t>(y) * w + x];
      if (s == 0) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int n = score[static_cast<std::size_t>(y + dy) * w + (x + dx)];
          // Ties go to the neighbor visited first in raster order.
          const bool before = dy < 0 || (dy == 0 && dx < 0);
          if (before ? n >= s : n > s) {
            is_max = false;
            break;
          }
        }
      if (!is_max) continue;
      const double r = detail::harris_response(gray, x, y);
      if (!(r > 0.0)) continue;
      kps.push_back({static_cast<double>(x), static_cast<double>(y), r, 0.0});
    }
  }
  std::stable_sort(kps.begin(), kps.end(),
                   [](const Keypoint& a, const Keypoint& b) { return a.response > b.response; });
  if (kps.size() > max_count) kps.resize(max_count);
  for (auto& kp : kps) kp.angle = detail::intensity_centroid_angle(gray, static_cast<int>(kp.x), static_cast<int>(kp.y));
  return kps;
}

/// Rotation-steered BRIEF over the fixed 256-pair pattern, sampled on a
/// Gaussian-smoothed copy of the image. Bit i is set when the first point of
/// pair i is darker than the second.
inline std::vector<Descriptor256> compute_descriptors(const ImageBuffer& gray, std::span<const Keypoint> keypoints,
                                                      bool steer = true) {
  if (gray.channels() != 1) return compute_descriptors(to_gray(gray), keypoints, steer);
  const int w = static_cast<int>(gray.width()), h = static_cast<int>(gray.height());
  for (const auto& kp : keypoints) {
    const int x = static_cast<int>(std::lround(kp.x)), y = static_cast<int>(std::lround(kp.y));
    if (x < kPatchBorder || y < kPatchBorder || x >= w - kPatchBorder || y >= h - kPatchBorder) {
      throw Error(ErrorCode::KeypointTooCloseToBorder,
                  "keypoint (" + std::to_string(kp.x) + ", " + std::to_string(kp.y) + ") within 16 px of border");
    }
  }
  const auto smoothed = detail::smooth(gray);
  std::vector<Descriptor256> out(keypoints.size());
  for (std::size_t k = 0; k < keypoints.size(); ++k) {
    const auto& kp = keypoints[k];
    const int cx = static_cast<int>(std::lround(kp.x)), cy = static_cast<int>(std::lround(kp.y));
    const double a = steer ? kp.angle : 0.0;
    const double c = std::cos(a), s = std::sin(a);
    auto sample = [&](int px, int py) {
      const int rx = static_cast<int>(std::lround(px * c - py * s));
      const int ry = static_cast<int>(std::lround(px * s + py * c));
      return smoothed[static_cast<std::size_t>(cy + ry) * w + (cx + rx)];
    };
    for (std::size_t i = 0; i < detail::kBriefPattern.size(); ++i) {
      const auto& p = detail::kBriefPattern[i];
      if (sample(p[0], p[1]) < sample(p[2], p[3])) {
        out[k].bytes[i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
      }
    }
  }
  return out;
}

/// Brute-force Hamming nearest neighbor from each descriptor of `a` into `b`
/// (ties to the lower index). With `cross_check`, only mutual nearest pairs
/// survive. Sorted by distance, then index_b.
inline std::vector<Match> match_descriptors(std::span<const Descriptor256> a, std::span<const Descriptor256> b,
                                            int max_distance, bool cross_check) {
  std::vector<Match> out;
  if (a.empty() || b.empty()) return out;
  auto nearest = [](const Descriptor256& q, std::span<const Descriptor256> pool) {
    std::size_t best = 0;
    int best_d = 257;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const int d = hamming_distance(q, pool[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return std::pair{best, best_d};
  };
  std::vector<std::size_t> back;
  if (cross_check) {
    back.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) back[j] = nearest(b[j], a).first;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [j, d] = nearest(a[i], b);
    if (d > max_distance) continue;
    if (cross_check && back[j] != i) continue;
    out.push_back({i, j, d});
  }
  std::stable_sort(out.begin(), out.end(), [](const Match& x, const Match& y) {
    return x.distance != y.distance ? x.distance < y.distance : x.index_b < y.index_b;
  });
  return out;
}

}  // namespace padbench
