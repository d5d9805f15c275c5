#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <set>

#include "support.hpp"

using namespace padbench;
namespace pt = padbench::testing;
using padbench::testing::make_record;

namespace {

Quad quad(double x0, double y0, double x1, double y1, double x2, double y2, double x3, double y3) {
  return Quad{{{{x0, y0}, {x1, y1}, {x2, y2}, {x3, y3}}}};
}

Quad full_frame(double w, double h) { return quad(0, 0, w, 0, w, h, 0, h); }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no padbench::Error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Rectify, FullFrameQuadIsATwoTimesDownscale) {
  std::mt19937_64 rng(31);
  // Smooth content keeps the comparison about geometry rather than aliasing.
  ImageBuffer frame(928, 1488, 1);
  for (std::uint32_t y = 0; y < 1488; ++y)
    for (std::uint32_t x = 0; x < 928; ++x)
      frame.at(x, y) = static_cast<std::uint8_t>(127.5 + 60 * std::sin(x / 23.0) + 60 * std::cos(y / 31.0));
  const PreprocessConfig cfg;
  const auto out = rectify_document(frame, full_frame(928, 1488), cfg);
  ASSERT_EQ(out.width(), 464u);
  ASSERT_EQ(out.height(), 744u);
  // Output pixel centre (i, j) sits at source pixel-centre coordinate (2i + 0.5, 2j + 0.5).
  double total = 0;
  for (std::uint32_t j = 0; j < 744; ++j)
    for (std::uint32_t i = 0; i < 464; ++i) {
      const double u = 2.0 * i + 0.5, v = 2.0 * j + 0.5;
      const auto x0 = static_cast<std::uint32_t>(u), y0 = static_cast<std::uint32_t>(v);
      const std::uint32_t x1 = std::min(x0 + 1, 927u), y1 = std::min(y0 + 1, 1487u);
      const double fx = u - x0, fy = v - y0;
      const double ref = (frame.at(x0, y0) * (1 - fx) + frame.at(x1, y0) * fx) * (1 - fy) +
                         (frame.at(x0, y1) * (1 - fx) + frame.at(x1, y1) * fx) * fy;
      total += std::abs(out.at(i, j) - ref);
    }
  EXPECT_LE(total / (464.0 * 744.0), 2.0);
}

TEST(Rectify, Errors) {
  const ImageBuffer frame(200, 300, 3, 5);
  const PreprocessConfig cfg;
  EXPECT_EQ(code_of([&] { rectify_document(frame, quad(0, 0, 50, 50, 100, 100, 10, 10), cfg); }),
            ErrorCode::DegenerateQuad);
  EXPECT_EQ(code_of([&] { rectify_document(frame, quad(0, 0, 100, 0, 0, 100, 100, 100), cfg); }),
            ErrorCode::DegenerateQuad);  // self-intersecting
  EXPECT_EQ(code_of([&] { rectify_document(frame, quad(-5, 0, 100, 0, 100, 100, 0, 100), cfg); }),
            ErrorCode::QuadOutOfBounds);
  EXPECT_EQ(code_of([&] { rectify_document(frame, quad(0, 0, 201, 0, 201, 100, 0, 100), cfg); }),
            ErrorCode::QuadOutOfBounds);
}

TEST(Rectify, ConstantFrameGivesConstantOutput) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> jitter(0, 80);
  const ImageBuffer frame(640, 900, 3, 143);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = quad(jitter(rng), jitter(rng), 640 - jitter(rng), jitter(rng), 640 - jitter(rng), 900 - jitter(rng),
                        jitter(rng), 900 - jitter(rng));
    const auto out = rectify_document(frame, q, PreprocessConfig{});
    for (auto v : out.data()) ASSERT_EQ(v, 143);
  }
}

TEST(Preprocess, DefaultsGive448x728x3) {
  std::mt19937_64 rng(33);
  const auto frame = pt::random_image(rng, 300, 480, 1);
  const auto out = preprocess_presentation(frame, quad(20, 30, 280, 25, 290, 460, 15, 470), PreprocessConfig{});
  EXPECT_EQ(out.width(), 448u);
  EXPECT_EQ(out.height(), 728u);
  EXPECT_EQ(out.channels(), 3u);
}

TEST(Preprocess, MaskMarginAgainstCropOffset) {
  const ImageBuffer frame(500, 800, 3, 200);
  const auto q = full_frame(500, 800);
  PreprocessConfig cfg;
  cfg.mask_margin = 8;
  for (auto v : preprocess_presentation(frame, q, cfg).data()) ASSERT_EQ(v, 200);

  cfg.mask_margin = 24;
  const auto out = preprocess_presentation(frame, q, cfg);
  for (std::uint32_t y = 0; y < 728; ++y)
    for (std::uint32_t x = 0; x < 448; ++x) {
      const bool border = x < 16 || y < 16 || x >= 432 || y >= 712;
      ASSERT_EQ(out.at(x, y, 0), border ? 0 : 200) << x << "," << y;
    }
}

TEST(Preprocess, EqualsStageComposition) {
  std::mt19937_64 rng(34);
  const auto frame = pt::random_image(rng, 540, 960, 3);
  const auto q = quad(40, 60, 500, 80, 510, 900, 30, 880);
  const PreprocessConfig cfg;
  const auto h = quad_to_rect_homography(q, 464, 744);
  const auto staged = center_crop(apply_background_mask(warp_perspective(frame, h, 464, 744), 16), 448, 728);
  EXPECT_EQ(preprocess_presentation(frame, q, cfg), staged);
}

TEST(Preprocess, ConfigValidation) {
  PreprocessConfig cfg;
  cfg.crop_width = 500;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::CropLargerThanSource);
  cfg = {};
  cfg.mask_margin = 232;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::MarginTooLarge);
}

TEST(Align, IdenticalImagesGiveIdentity) {
  const auto img = pt::textured_card(320, 240, 41);
  const auto [aligned, report] = align_attack_to_bonafide(img, img, AlignParams{});
  EXPECT_LT((report.h.matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_GE(report.inlier_count, 10u);
  EXPECT_EQ(aligned, img);
}

TEST(Align, RecoversPlantedTranslation) {
  std::mt19937_64 rng(42);
  const auto bona = pt::textured_card(320, 240, 43);
  auto attack = warp_perspective(bona, Homography::translation(7, -4), 320, 240);
  pt::add_noise(attack, 4.0, rng);
  const auto [aligned, report] = align_attack_to_bonafide(bona, attack, AlignParams{});
  EXPECT_LT(report.mean_error_px, 1.0);
  const auto p = project_point(report.h, {160, 120});
  EXPECT_NEAR(p.x, 153, 0.5);
  EXPECT_NEAR(p.y, 124, 0.5);
}

TEST(Align, UnrelatedConstantImageFails) {
  const auto bona = pt::textured_card(320, 240, 44);
  const ImageBuffer flat(320, 240, 1, 128);
  EXPECT_EQ(code_of([&] { align_attack_to_bonafide(bona, flat, AlignParams{}); }), ErrorCode::AlignmentFailed);
  const auto outcome = try_align_attack_to_bonafide(bona, flat, AlignParams{});
  EXPECT_FALSE(outcome.aligned);
  EXPECT_FALSE(outcome.failure.empty());
}

TEST(Align, PreconditionErrors) {
  EXPECT_EQ(code_of([] { align_attack_to_bonafide(ImageBuffer(63, 100, 1), ImageBuffer(100, 100, 1), {}); }),
            ErrorCode::ImageTooSmall);
  EXPECT_EQ(code_of([] { align_attack_to_bonafide(ImageBuffer(100, 100, 3), ImageBuffer(100, 100, 1), {}); }),
            ErrorCode::DimensionMismatch);
}

namespace {

Manifest pairing_manifest() {
  Manifest m;
  for (int b = 0; b < 3; ++b)
    m.push_back(make_record(SourceDataset::Dlc2021, DocType::AlbId, "04", ClassLabel::BonaFide, "b" + std::to_string(b)));
  for (int a = 0; a < 2; ++a)
    m.push_back(make_record(SourceDataset::Dlc2021, DocType::AlbId, "04", ClassLabel::Print, "p" + std::to_string(a)));
  m.push_back(make_record(SourceDataset::Dlc2021, DocType::AlbId, "04", ClassLabel::Print, "p_out", false));
  m.push_back(make_record(SourceDataset::Dlc2021, DocType::AlbId, "04", ClassLabel::Screen, "s0"));
  m.push_back(make_record(SourceDataset::Midv2020, DocType::EspId, "30", ClassLabel::BonaFide, "lonely"));
  return m;
}

}  // namespace

TEST(Pairing, SinglePairIsForced) {
  const Manifest m = {make_record(SourceDataset::Dlc2021, DocType::EstId, "01", ClassLabel::BonaFide, "b"),
                      make_record(SourceDataset::Dlc2021, DocType::EstId, "01", ClassLabel::Print, "p")};
  const auto r = pair_presentations(m, Task::Print, 0);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].bona.frame_path, "b");
  EXPECT_EQ(r.pairs[0].attack.frame_path, "p");
}

TEST(Pairing, SkipsAndFiltersAndIsDeterministic) {
  const auto m = pairing_manifest();
  const auto a = pair_presentations(m, Task::Print, 17);
  const auto b = pair_presentations(m, Task::Print, 17);
  ASSERT_EQ(a.pairs.size(), 3u);
  EXPECT_EQ(a.skipped_subjects, 1u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.pairs[i].attack.frame_path, b.pairs[i].attack.frame_path);
    EXPECT_NE(a.pairs[i].attack.frame_path, "p_out");
    EXPECT_EQ(a.pairs[i].attack.class_label, ClassLabel::Print);
  }
  const auto s = pair_presentations(m, Task::Screen, 17);
  for (const auto& p : s.pairs) EXPECT_EQ(p.attack.frame_path, "s0");
}

TEST(Pairing, UniformAttackChoice) {
  const auto m = pairing_manifest();
  std::map<std::string, int> hits;
  int draws = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    for (const auto& p : pair_presentations(m, Task::Print, seed).pairs) {
      ++hits[p.attack.frame_path];
      ++draws;
    }
  for (const auto& name : {"p0", "p1"}) EXPECT_NEAR(hits[name] / static_cast<double>(draws), 0.5, 0.05) << name;
}

TEST(Pairing, NoPairableSubjects) {
  const Manifest m = {make_record(SourceDataset::Dlc2021, DocType::EstId, "01", ClassLabel::BonaFide, "b")};
  EXPECT_EQ(code_of([&] { pair_presentations(m, Task::Print, 0); }), ErrorCode::NoPairableSubjects);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndRethrows) {
  for (unsigned jobs : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> seen(257);
    parallel_for(seen.size(), jobs, [&](std::size_t i) { ++seen[i]; });
    for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
  }
  EXPECT_THROW(parallel_for(50, 4, [](std::size_t i) {
                 if (i == 13) throw Error(ErrorCode::IoError, "boom");
               }),
               Error);
}
