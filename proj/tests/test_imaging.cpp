#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace padbench;
namespace pt = padbench::testing;
using padbench::testing::TempDir;

namespace {

const std::filesystem::path kData = PADBENCH_TEST_DATA;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no padbench::Error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(ImageIo, LoadsRgbPng) {
  const auto img = load_image(kData / "rgb_2x2.png");
  EXPECT_EQ(img.width(), 2u);
  EXPECT_EQ(img.height(), 2u);
  EXPECT_EQ(img.channels(), 3u);
  EXPECT_EQ(img.at(0, 0, 0), 255);
  EXPECT_EQ(img.at(1, 0, 1), 255);
  EXPECT_EQ(img.at(0, 1, 2), 255);
  EXPECT_EQ(img.at(1, 1, 0), 10);
  EXPECT_EQ(img.at(1, 1, 2), 30);
}

TEST(ImageIo, KeepsGrayAndDropsAlpha) {
  const auto gray = load_image(kData / "gray_3x2.png");
  EXPECT_EQ(gray.channels(), 1u);
  EXPECT_EQ(gray.at(2, 1), 250);
  const auto rgba = load_image(kData / "rgba_2x1.png");
  EXPECT_EQ(rgba.channels(), 3u);
  EXPECT_EQ(rgba.at(1, 0, 2), 6);
}

TEST(ImageIo, LoadsJpegAsRgb) {
  const auto img = load_image(kData / "solid_16x8.jpg");
  EXPECT_EQ(img.width(), 16u);
  EXPECT_EQ(img.height(), 8u);
  EXPECT_EQ(img.channels(), 3u);
  EXPECT_NEAR(img.at(5, 5, 0), 120, 3);
  EXPECT_NEAR(img.at(5, 5, 1), 60, 3);
}

TEST(ImageIo, Errors) {
  EXPECT_EQ(code_of([] { load_image(kData / "not_an_image.txt"); }), ErrorCode::UnsupportedFormat);
  EXPECT_EQ(code_of([] { load_image(kData / "missing.png"); }), ErrorCode::FileNotFound);
  EXPECT_EQ(code_of([] { load_image(kData / "truncated.png"); }), ErrorCode::CorruptImage);
}

TEST(ImageIo, PngRoundTripIsBitExact) {
  TempDir dir("io");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 40), ch(0, 1);
  for (int i = 0; i < 50; ++i) {
    const auto img = pt::random_image(rng, dim(rng), dim(rng), ch(rng) ? 3 : 1);
    const auto path = dir / ("img" + std::to_string(i) + ".png");
    save_image(img, path);
    EXPECT_EQ(load_image(path), img) << "buffer " << i;
  }
}

TEST(ImageIo, JpegRoundTripIsClose) {
  TempDir dir("jpg");
  const ImageBuffer img(32, 16, 3, 90);
  save_image(img, dir / "a.jpg");
  const auto back = load_image(dir / "a.jpg");
  ASSERT_EQ(back.width(), 32u);
  for (auto v : back.data()) EXPECT_NEAR(v, 90, 2);
}

TEST(ImageBufferTest, RejectsBadShapes) {
  EXPECT_EQ(code_of([] { ImageBuffer(0, 3, 1); }), ErrorCode::CorruptImage);
  EXPECT_EQ(code_of([] { ImageBuffer(2, 2, 2); }), ErrorCode::CorruptImage);
  EXPECT_EQ(code_of([] { ImageBuffer(2, 2, 1, std::vector<std::uint8_t>(3)); }), ErrorCode::CorruptImage);
}

TEST(Warp, IdentityReproducesSource) {
  std::mt19937_64 rng(1);
  const auto src = pt::random_image(rng, 37, 23, 3);
  EXPECT_EQ(warp_perspective(src, Homography::identity(), 37, 23), src);
}

TEST(Warp, IntegerTranslationShiftsWithZeroFill) {
  std::mt19937_64 rng(2);
  const auto src = pt::random_image(rng, 40, 30, 1);
  const auto out = warp_perspective(src, Homography::translation(5, 3), 40, 30);
  for (std::uint32_t y = 0; y < 30; ++y)
    for (std::uint32_t x = 0; x < 40; ++x) {
      const std::uint8_t expected = (x >= 5 && y >= 3) ? src.at(x - 5, y - 3) : 0;
      ASSERT_EQ(out.at(x, y), expected) << x << "," << y;
    }
}

TEST(Warp, ConstantColourStaysConstant) {
  const ImageBuffer src(300, 500, 3, 77);
  Eigen::Matrix3d m;
  // Pixel centres 0..299 onto 0..463 (and 0..499 onto 0..743).
  m << 463.0 / 299.0, 0, 0, 0, 743.0 / 499.0, 0, 0, 0, 1;
  const auto out = warp_perspective(src, Homography(m), 464, 744);
  EXPECT_EQ(out.width(), 464u);
  EXPECT_EQ(out.height(), 744u);
  for (std::uint32_t y = 0; y < 744; ++y)
    for (std::uint32_t x = 0; x < 464; ++x) ASSERT_EQ(out.at(x, y, 1), 77) << x << "," << y;
}

TEST(Crop, CentreOffsets) {
  ImageBuffer src(464, 744, 1);
  for (std::uint32_t y = 0; y < 744; ++y)
    for (std::uint32_t x = 0; x < 464; ++x) src.at(x, y) = static_cast<std::uint8_t>((x * 7 + y * 3) % 251);
  const auto out = center_crop(src, 448, 728);
  for (std::uint32_t y = 0; y < 728; ++y)
    for (std::uint32_t x = 0; x < 448; ++x) ASSERT_EQ(out.at(x, y), src.at(x + 8, y + 8));
  EXPECT_EQ(center_crop(src, 464, 744), src);
  EXPECT_EQ(code_of([&] { center_crop(src, 500, 500); }), ErrorCode::CropLargerThanSource);
}

TEST(Mask, FramesTheBorder) {
  std::mt19937_64 rng(3);
  const auto src = pt::random_image(rng, 20, 10, 3);
  EXPECT_EQ(apply_background_mask(src, 0), src);

  const ImageBuffer white(464, 744, 3, 255);
  const auto out = apply_background_mask(white, 8);
  for (std::uint32_t y = 0; y < 744; ++y)
    for (std::uint32_t x = 0; x < 464; ++x) {
      const bool border = x < 8 || y < 8 || x >= 456 || y >= 736;
      ASSERT_EQ(out.at(x, y, 2), border ? 0 : 255) << x << "," << y;
    }
  EXPECT_EQ(code_of([&] { apply_background_mask(white, 400); }), ErrorCode::MarginTooLarge);
}

TEST(Colour, GrayAndRgbConversions) {
  ImageBuffer rgb(2, 1, 3);
  rgb.at(0, 0, 0) = 255;
  rgb.at(1, 0, 0) = 10, rgb.at(1, 0, 1) = 200, rgb.at(1, 0, 2) = 30;
  const auto gray = to_gray(rgb);
  EXPECT_EQ(gray.at(0, 0), 76);   // 0.299 * 255 = 76.2
  EXPECT_EQ(gray.at(1, 0), 124);  // 2.99 + 117.4 + 3.42 = 123.8
  const auto back = to_rgb(gray);
  EXPECT_EQ(back.channels(), 3u);
  EXPECT_EQ(back.at(1, 0, 2), 124);
}
