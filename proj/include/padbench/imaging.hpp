#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace padbench {

/// Row-major 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
class ImageBuffer {
 public:
  ImageBuffer() = default;

  ImageBuffer(std::uint32_t width, std::uint32_t height, std::uint32_t channels, std::uint8_t fill = 0)
      : width_(width), height_(height), channels_(channels) {
    check_shape();
    data_.assign(size(), fill);
  }

  ImageBuffer(std::uint32_t width, std::uint32_t height, std::uint32_t channels,
              std::vector<std::uint8_t> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_shape();
    if (data_.size() != size()) {
      throw Error(ErrorCode::CorruptImage, "pixel data length does not match width*height*channels");
    }
  }

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t at(std::uint32_t x, std::uint32_t y, std::uint32_t c = 0) const {
    return data_[index(x, y, c)];
  }
  std::uint8_t& at(std::uint32_t x, std::uint32_t y, std::uint32_t c = 0) { return data_[index(x, y, c)]; }

  std::size_t row_stride() const noexcept { return static_cast<std::size_t>(width_) * channels_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width_) * height_ * channels_;
  }
  std::size_t index(std::uint32_t x, std::uint32_t y, std::uint32_t c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  void check_shape() const {
    if (width_ < 1 || height_ < 1) throw Error(ErrorCode::CorruptImage, "image dimensions must be >= 1");
    if (channels_ != 1 && channels_ != 3) throw Error(ErrorCode::CorruptImage, "channels must be 1 or 3");
  }

  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::uint32_t channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Document corners in continuous frame coordinates (the frame spans
/// [0, width] x [0, height]); order TL, TR, BR, BL.
struct Quad {
  std::array<Point2, 4> corners{};

  double signed_area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& p = corners[i];
      const auto& q = corners[(i + 1) % 4];
      a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
  }

  /// Strictly convex with no three corners collinear.
  bool non_degenerate() const {
    int sign = 0;
    const double scale = std::max(1.0, std::abs(signed_area()));
    for (std::size_t i = 0; i < 4; ++i) {
      const double c = detail::cross(corners[i], corners[(i + 1) % 4], corners[(i + 2) % 4]);
      if (!std::isfinite(c) || std::abs(c) <= 1e-9 * scale) return false;
      const int s = c > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
    return true;
  }
};

/// Inverse-mapped bilinear resampling: output (x, y) reads src at h^-1 (x, y).
/// Samples falling outside the source are 0.
inline ImageBuffer warp_perspective(const ImageBuffer& src, const Homography& h, std::uint32_t out_width,
                                    std::uint32_t out_height) {
  const Eigen::Matrix3d inv = h.inverse().matrix();
  ImageBuffer out(out_width, out_height, src.channels());
  const std::uint32_t ch = src.channels();
  const double max_x = static_cast<double>(src.width() - 1);
  const double max_y = static_cast<double>(src.height() - 1);
  constexpr double kEdgeTol = 1e-6;
  const auto in = src.data();
  auto dst = out.data();

  for (std::uint32_t y = 0; y < out_height; ++y) {
    for (std::uint32_t x = 0; x < out_width; ++x) {
      const double w = inv(2, 0) * x + inv(2, 1) * y + inv(2, 2);
      if (!(w > 0.0)) continue;
      double u = (inv(0, 0) * x + inv(0, 1) * y + inv(0, 2)) / w;
      double v = (inv(1, 0) * x + inv(1, 1) * y + inv(1, 2)) / w;
      if (!(u >= -kEdgeTol && u <= max_x + kEdgeTol && v >= -kEdgeTol && v <= max_y + kEdgeTol)) continue;
      u = std::clamp(u, 0.0, max_x);
      v = std::clamp(v, 0.0, max_y);
      const auto x0 = static_cast<std::uint32_t>(u);
      const auto y0 = static_cast<std::uint32_t>(v);
      const std::uint32_t x1 = std::min(x0 + 1, src.width() - 1);
      const std::uint32_t y1 = std::min(y0 + 1, src.height() - 1);
      const double fx = u - x0;
      const double fy = v - y0;
      const std::size_t r0 = static_cast<std::size_t>(y0) * src.row_stride();
      const std::size_t r1 = static_cast<std::size_t>(y1) * src.row_stride();
      const std::size_t o = (static_cast<std::size_t>(y) * out_width + x) * ch;
      for (std::uint32_t c = 0; c < ch; ++c) {
        const double top = in[r0 + x0 * ch + c] * (1.0 - fx) + in[r0 + x1 * ch + c] * fx;
        const double bot = in[r1 + x0 * ch + c] * (1.0 - fx) + in[r1 + x1 * ch + c] * fx;
        const double val = top * (1.0 - fy) + bot * fy;
        dst[o + c] = static_cast<std::uint8_t>(std::clamp(std::lround(val), 0L, 255L));
      }
    }
  }
  return out;
}

/// The w x h window at offset (floor((W - w) / 2), floor((H - h) / 2)).
inline ImageBuffer center_crop(const ImageBuffer& src, std::uint32_t w, std::uint32_t h) {
  if (w > src.width() || h > src.height()) {
    throw Error(ErrorCode::CropLargerThanSource,
                std::to_string(w) + "x" + std::to_string(h) + " crop from " + std::to_string(src.width()) +
                    "x" + std::to_string(src.height()));
  }
  const std::uint32_t ox = (src.width() - w) / 2;
  const std::uint32_t oy = (src.height() - h) / 2;
  ImageBuffer out(w, h, src.channels());
  const std::size_t row_bytes = static_cast<std::size_t>(w) * src.channels();
  for (std::uint32_t y = 0; y < h; ++y) {
    const auto row = src.data().subspan((static_cast<std::size_t>(y + oy) * src.width() + ox) * src.channels(),
                                        row_bytes);
    std::copy(row.begin(), row.end(), out.data().begin() + static_cast<std::ptrdiff_t>(y * row_bytes));
  }
  return out;
}

/// Zeroes every pixel closer than `margin` to an image edge.
inline ImageBuffer apply_background_mask(const ImageBuffer& src, std::uint32_t margin) {
  if (2ULL * margin >= std::min(src.width(), src.height())) {
    throw Error(ErrorCode::MarginTooLarge, "2 * margin must be smaller than both image dimensions");
  }
  ImageBuffer out = src;
  if (margin == 0) return out;
  for (std::uint32_t y = 0; y < src.height(); ++y) {
    const bool band = y < margin || y >= src.height() - margin;
    for (std::uint32_t x = 0; x < src.width(); ++x) {
      if (band || x < margin || x >= src.width() - margin) {
        for (std::uint32_t c = 0; c < src.channels(); ++c) out.at(x, y, c) = 0;
      }
    }
  }
  return out;
}

/// ITU-R BT.601 luma, rounded to nearest.
inline ImageBuffer to_gray(const ImageBuffer& src) {
  if (src.channels() == 1) return src;
  ImageBuffer out(src.width(), src.height(), 1);
  const auto in = src.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const unsigned r = in[3 * i], g = in[3 * i + 1], b = in[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  return out;
}

inline ImageBuffer to_rgb(const ImageBuffer& src) {
  if (src.channels() == 3) return src;
  ImageBuffer out(src.width(), src.height(), 3);
  const auto in = src.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = in[i];
  return out;
}

}  // namespace padbench
