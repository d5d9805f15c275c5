#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "features.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "rng.hpp"

namespace padbench {

/// Defaults reproduce the published preprocessing: project to 464x744, mask,
/// centre-crop 448x728. The 16 px mask margin is a toolkit convention.
struct PreprocessConfig {
  std::uint32_t rect_width = 464;
  std::uint32_t rect_height = 744;
  std::uint32_t mask_margin = 16;
  std::uint32_t crop_width = 448;
  std::uint32_t crop_height = 728;

  void validate() const {
    if (crop_width > rect_width || crop_height > rect_height) {
      throw Error(ErrorCode::CropLargerThanSource, "crop dims exceed rectified dims");
    }
    if (2ULL * mask_margin >= std::min(rect_width, rect_height)) {
      throw Error(ErrorCode::MarginTooLarge, "2 * mask_margin must be below the rectified dims");
    }
  }
};

/// Homography taking the quad onto the rect_width x rect_height rectangle,
/// expressed in pixel-centre coordinates (pixel (i, j) sits at (i, j)).
inline Homography quad_to_rect_homography(const Quad& quad, std::uint32_t width, std::uint32_t height) {
  const double w = width, h = height;
  const std::array<Point2, 4> rect{{{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}}};
  std::vector<PointPair> pairs;
  for (std::size_t i = 0; i < 4; ++i) pairs.push_back({quad.corners[i], rect[i]});
  const Homography edges = estimate_homography_dlt(pairs);
  return Homography::translation(-0.5, -0.5).compose(edges).compose(Homography::translation(0.5, 0.5));
}

inline ImageBuffer rectify_document(const ImageBuffer& frame, const Quad& quad, const PreprocessConfig& cfg) {
  if (!quad.non_degenerate()) throw Error(ErrorCode::DegenerateQuad, "quad is collinear, self-intersecting or empty");
  constexpr double kTol = 1e-9;
  for (const auto& c : quad.corners) {
    if (c.x < -kTol || c.y < -kTol || c.x > frame.width() + kTol || c.y > frame.height() + kTol) {
      throw Error(ErrorCode::QuadOutOfBounds, "quad corner (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                                                  ") outside the frame");
    }
  }
  Homography h;
  try {
    h = quad_to_rect_homography(quad, cfg.rect_width, cfg.rect_height);
  } catch (const Error& e) {
    throw Error(ErrorCode::DegenerateQuad, e.detail());
  }
  return warp_perspective(frame, h, cfg.rect_width, cfg.rect_height);
}

/// Rectify, mask, then centre-crop. Always returns RGB.
inline ImageBuffer preprocess_presentation(const ImageBuffer& frame, const Quad& quad, const PreprocessConfig& cfg) {
  cfg.validate();
  const ImageBuffer rect = rectify_document(to_rgb(frame), quad, cfg);
  return center_crop(apply_background_mask(rect, cfg.mask_margin), cfg.crop_width, cfg.crop_height);
}

// ---------------------------------------------------------------------------

struct AlignParams {
  FeatureParams features;
  RansacParams ransac;
  std::size_t min_matches = 10;
  std::size_t min_inliers = 4;
  double max_mean_error_px = 5.0;
};

struct AlignmentReport {
  std::size_t match_count = 0;
  std::size_t inlier_count = 0;
  double mean_error_px = 0.0;  ///< Mean forward reprojection error over inliers.
  Homography h;                ///< attack -> bona fide coordinates.
};

struct AlignmentOutcome {
  std::optional<ImageBuffer> aligned;
  AlignmentReport report;
  std::string failure;  ///< Empty on success.
};

/// Same as align_attack_to_bonafide, but reports rejection in the outcome
/// instead of throwing AlignmentFailed.
inline AlignmentOutcome try_align_attack_to_bonafide(const ImageBuffer& bona, const ImageBuffer& attack,
                                                     const AlignParams& params) {
  if (bona.width() < 64 || bona.height() < 64 || attack.width() < 64 || attack.height() < 64) {
    throw Error(ErrorCode::ImageTooSmall, "alignment needs images of at least 64x64");
  }
  if (bona.channels() != attack.channels()) {
    throw Error(ErrorCode::DimensionMismatch, "bona fide and attack images differ in channel count");
  }
  AlignmentOutcome out;
  const ImageBuffer gray_bona = to_gray(bona);
  const ImageBuffer gray_attack = to_gray(attack);
  const auto kp_bona = detect_keypoints(gray_bona, params.features.fast_threshold, params.features.max_keypoints);
  const auto kp_attack = detect_keypoints(gray_attack, params.features.fast_threshold, params.features.max_keypoints);
  const auto d_bona = compute_descriptors(gray_bona, kp_bona);
  const auto d_attack = compute_descriptors(gray_attack, kp_attack);
  const auto matches = match_descriptors(d_attack, d_bona, params.features.max_distance, params.features.cross_check);
  out.report.match_count = matches.size();
  if (matches.size() < params.min_matches) {
    out.failure = "only " + std::to_string(matches.size()) + " matches (need " + std::to_string(params.min_matches) + ")";
    return out;
  }

  std::vector<PointPair> pairs;
  pairs.reserve(matches.size());
  for (const auto& m : matches) {
    pairs.push_back({{kp_attack[m.index_a].x, kp_attack[m.index_a].y}, {kp_bona[m.index_b].x, kp_bona[m.index_b].y}});
  }
  RansacResult rr;
  try {
    rr = ransac_homography(pairs, params.ransac);
  } catch (const Error& e) {
    out.failure = e.detail();
    return out;
  }
  out.report.h = rr.h;
  out.report.inlier_count = rr.inlier_count;
  double total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!rr.inliers[i]) continue;
    const Point2 p = project_point(rr.h, pairs[i].src);
    total += std::hypot(p.x - pairs[i].dst.x, p.y - pairs[i].dst.y);
  }
  out.report.mean_error_px = rr.inlier_count ? total / static_cast<double>(rr.inlier_count) : 0.0;
  if (rr.inlier_count < params.min_inliers) {
    out.failure = "only " + std::to_string(rr.inlier_count) + " inliers";
    return out;
  }
  if (out.report.mean_error_px > params.max_mean_error_px) {
    out.failure = "mean inlier error " + std::to_string(out.report.mean_error_px) + " px";
    return out;
  }
  if (!rr.h.invertible()) {
    out.failure = "singular homography";
    return out;
  }
  out.aligned = warp_perspective(attack, rr.h, bona.width(), bona.height());
  return out;
}

/// ORB-style features on both images, Hamming matching, RANSAC homography,
/// then the attack warped into bona fide coordinates at bona fide size.
/// Throws AlignmentFailed when the pair is unusable as paired training data.
inline std::pair<ImageBuffer, AlignmentReport> align_attack_to_bonafide(const ImageBuffer& bona,
                                                                        const ImageBuffer& attack,
                                                                        const AlignParams& params) {
  auto outcome = try_align_attack_to_bonafide(bona, attack, params);
  if (!outcome.aligned) throw Error(ErrorCode::AlignmentFailed, outcome.failure);
  return {std::move(*outcome.aligned), outcome.report};
}

// ---------------------------------------------------------------------------

struct PresentationPair {
  FrameRecord bona;
  FrameRecord attack;
};

struct PairingResult {
  std::vector<PresentationPair> pairs;
  std::size_t skipped_subjects = 0;  ///< Subjects with bona fide frames but no attack frames.
};

/// Pairs every in-frame bona fide frame with a uniformly drawn in-frame attack
/// frame of the same subject. Subjects are visited in key order and frames in
/// path order, drawing from one SplitMix64(seed) stream.
inline PairingResult pair_presentations(const Manifest& manifest, Task task, std::uint64_t seed) {
  const ClassLabel attack = attack_class(task);
  std::map<std::string, std::pair<std::vector<const FrameRecord*>, std::vector<const FrameRecord*>>> by_subject;
  for (const auto& r : manifest) {
    if (!r.in_frame) continue;
    if (r.class_label == ClassLabel::BonaFide) by_subject[subject_key(r)].first.push_back(&r);
    if (r.class_label == attack) by_subject[subject_key(r)].second.push_back(&r);
  }
  auto by_path = [](const FrameRecord* a, const FrameRecord* b) { return a->frame_path < b->frame_path; };
  PairingResult out;
  SplitMix64 rng(seed);
  for (auto& [key, frames] : by_subject) {
    auto& [bonas, attacks] = frames;
    if (bonas.empty()) continue;
    if (attacks.empty()) {
      ++out.skipped_subjects;
      continue;
    }
    std::stable_sort(bonas.begin(), bonas.end(), by_path);
    std::stable_sort(attacks.begin(), attacks.end(), by_path);
    for (const auto* b : bonas) out.pairs.push_back({*b, *attacks[rng.below(attacks.size())]});
  }
  if (out.pairs.empty()) throw Error(ErrorCode::NoPairableSubjects, "no subject has both bona fide and attack frames");
  return out;
}

/// Runs job(i) for i in [0, count) on up to `jobs` threads. The first
/// exception is rethrown after all workers stop.
inline void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& job) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        next = count;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace padbench
