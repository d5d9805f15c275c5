#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace padbench {

/// One classifier output. label 0 is bona fide, j >= 1 is attack type j;
/// score is the claimed probability of attack.
struct ScoreRecord {
  std::string presentation_id;
  int label = 0;
  double score = 0.0;
};

enum class ScorePolarity {
  AttackHigh,    ///< higher score = more attack-like (default)
  BonaFideHigh,  ///< scores are mirrored to 1 - s on load
};

// Decision rule everywhere: predict attack iff score >= threshold.

/// APCER_j(t) in percent for every attack label j present.
inline std::map<int, double> apcer_per_pai(const std::vector<ScoreRecord>& records, double threshold) {
  std::map<int, std::pair<std::size_t, std::size_t>> counts;  // j -> (missed, total)
  for (const auto& r : records) {
    if (r.label < 1) continue;
    auto& c = counts[r.label];
    ++c.second;
    if (r.score < threshold) ++c.first;
  }
  if (counts.empty()) throw Error(ErrorCode::NoAttackRecords, "no attack presentations");
  std::map<int, double> out;
  for (const auto& [j, c] : counts) out[j] = 100.0 * static_cast<double>(c.first) / static_cast<double>(c.second);
  return out;
}

/// Worst case over attack types.
inline double apcer_max(const std::vector<ScoreRecord>& records, double threshold) {
  double worst = 0.0;
  for (const auto& [j, v] : apcer_per_pai(records, threshold)) worst = std::max(worst, v);
  return worst;
}

inline double bpcer(const std::vector<ScoreRecord>& records, double threshold) {
  std::size_t rejected = 0, total = 0;
  for (const auto& r : records) {
    if (r.label != 0) continue;
    ++total;
    if (r.score >= threshold) ++rejected;
  }
  if (total == 0) throw Error(ErrorCode::NoBonaFideRecords, "no bona fide presentations");
  return 100.0 * static_cast<double>(rejected) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------

struct DetPoint {
  double threshold = 0.0;
  std::vector<std::size_t> attack_missed;  ///< Per PAI, attacks with score < threshold.
  std::size_t bona_rejected = 0;           ///< Bona fide with score >= threshold.
  double apcer_max = 0.0;
  double bpcer = 0.0;
  std::vector<double> apcer;  ///< Per PAI, aligned with DetCurve::pai_labels.
};

/// Operating points at -inf, every distinct score (ascending) and +inf.
/// APCER is non-decreasing and BPCER non-increasing along `points`.
struct DetCurve {
  std::vector<int> pai_labels;
  std::vector<std::size_t> pai_totals;
  std::size_t bona_total = 0;
  std::vector<DetPoint> points;
};

namespace detail {

// Exact comparisons on count ratios: sign(a/b - c/d) for b, d > 0.
inline int compare_ratio(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const auto lhs = static_cast<unsigned __int128>(a) * d;
  const auto rhs = static_cast<unsigned __int128>(c) * b;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// Index of the PAI with the largest APCER at a point.
inline std::size_t worst_pai(const DetCurve& c, const DetPoint& p) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < c.pai_labels.size(); ++j) {
    if (compare_ratio(p.attack_missed[j], c.pai_totals[j], p.attack_missed[best], c.pai_totals[best]) > 0) best = j;
  }
  return best;
}

// Exact sign of APCER_max - BPCER at a point.
inline int apcer_minus_bpcer_sign(const DetCurve& c, const DetPoint& p) {
  const std::size_t j = worst_pai(c, p);
  return compare_ratio(p.attack_missed[j], c.pai_totals[j], p.bona_rejected, c.bona_total);
}

inline void fill_rates(const DetCurve& c, DetPoint& p) {
  p.apcer.resize(c.pai_labels.size());
  p.apcer_max = 0.0;
  for (std::size_t j = 0; j < c.pai_labels.size(); ++j) {
    p.apcer[j] = 100.0 * static_cast<double>(p.attack_missed[j]) / static_cast<double>(c.pai_totals[j]);
    p.apcer_max = std::max(p.apcer_max, p.apcer[j]);
  }
  p.bpcer = 100.0 * static_cast<double>(p.bona_rejected) / static_cast<double>(c.bona_total);
}

}  // namespace detail

/// Sweeps every distinct score once. Rates are exact count ratios scaled by
/// 100, so the result does not depend on record order.
inline DetCurve compute_det(std::vector<ScoreRecord> records) {
  DetCurve curve;
  std::map<int, std::size_t> pai_index;
  for (const auto& r : records) {
    if (r.label == 0) {
      ++curve.bona_total;
    } else if (r.label > 0) {
      pai_index.emplace(r.label, 0);
    } else {
      throw Error(ErrorCode::InvalidScoreFile, "negative label");
    }
  }
  if (curve.bona_total == 0 || pai_index.empty()) {
    throw Error(ErrorCode::MissingClass, "both bona fide and attack presentations are required");
  }
  for (auto& [label, idx] : pai_index) {
    idx = curve.pai_labels.size();
    curve.pai_labels.push_back(label);
  }
  curve.pai_totals.assign(curve.pai_labels.size(), 0);
  for (const auto& r : records)
    if (r.label > 0) ++curve.pai_totals[pai_index[r.label]];

  std::sort(records.begin(), records.end(),
            [](const ScoreRecord& a, const ScoreRecord& b) { return a.score < b.score; });

  DetPoint running;
  running.threshold = -std::numeric_limits<double>::infinity();
  running.attack_missed.assign(curve.pai_labels.size(), 0);
  running.bona_rejected = curve.bona_total;
  detail::fill_rates(curve, running);
  curve.points.push_back(running);

  std::size_t i = 0;
  while (i < records.size()) {
    const double s = records[i].score;
    running.threshold = s;
    detail::fill_rates(curve, running);
    curve.points.push_back(running);
    // Records at exactly s are classified attack at threshold s; they move to
    // the "below threshold" side for every larger threshold.
    for (; i < records.size() && records[i].score == s; ++i) {
      if (records[i].label == 0) {
        --running.bona_rejected;
      } else {
        ++running.attack_missed[pai_index[records[i].label]];
      }
    }
  }
  running.threshold = std::numeric_limits<double>::infinity();
  detail::fill_rates(curve, running);
  curve.points.push_back(running);
  return curve;
}

/// EER in percent: an exact APCER = BPCER point if one exists, otherwise the
/// crossing of the straight segment between the two points that bracket the
/// sign change of APCER - BPCER.
inline double compute_eer(const DetCurve& curve) {
  const auto& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int sign = detail::apcer_minus_bpcer_sign(curve, pts[i]);
    if (sign == 0) return pts[i].apcer_max;
    if (sign > 0) {
      if (i == 0) return pts[i].apcer_max;
      const auto& p0 = pts[i - 1];
      const auto& p1 = pts[i];
      const double d0 = p0.apcer_max - p0.bpcer;
      const double d1 = p1.apcer_max - p1.bpcer;
      const double t = -d0 / (d1 - d0);
      return p0.apcer_max + t * (p1.apcer_max - p0.apcer_max);
    }
  }
  return pts.back().apcer_max;
}

struct OperatingPoint {
  double bpcer = 0.0;
  bool saturated = false;  ///< The target APCER forces every bona fide to be rejected.
};

/// BPCER at APCER = 100/ap percent. Anchored at the last (largest-threshold)
/// point with APCER <= target and interpolated linearly toward the next point.
inline OperatingPoint bpcer_at_ap(const DetCurve& curve, int ap) {
  if (ap <= 0) throw Error(ErrorCode::OutOfDomain, "ap must be positive");
  const double target = 100.0 / ap;
  const auto& pts = curve.points;
  auto within = [&](const DetPoint& p) {
    // max_j missed_j / total_j <= 1 / ap, exactly.
    for (std::size_t j = 0; j < curve.pai_labels.size(); ++j) {
      if (static_cast<unsigned __int128>(p.attack_missed[j]) * static_cast<unsigned>(ap) > curve.pai_totals[j]) {
        return false;
      }
    }
    return true;
  };
  std::size_t anchor = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (within(pts[i])) anchor = i;

  const auto& p0 = pts[anchor];
  double value = p0.bpcer;
  if (p0.apcer_max < target && anchor + 1 < pts.size()) {
    const auto& p1 = pts[anchor + 1];
    const double t = (target - p0.apcer_max) / (p1.apcer_max - p0.apcer_max);
    value = p0.bpcer + t * (p1.bpcer - p0.bpcer);
  }
  return {value, value >= 100.0};
}

// ---------------------------------------------------------------------------

namespace detail {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Acklam's rational approximation (relative error ~1.2e-9) for p <= 0.5.
inline double acklam_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

inline double probit_lower(double p) {
  double x = acklam_lower(p);
  // One Newton step against the erfc-based CDF.
  x -= (normal_cdf(x) - p) / normal_pdf(x);
  return x;
}

}  // namespace detail

/// Standard normal quantile. The upper half is computed from 1 - p, which is
/// exact in binary floating point for p >= 0.5.
inline double probit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::OutOfDomain, "probit needs 0 < p < 1");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return detail::probit_lower(p);
  return -detail::probit_lower(1.0 - p);
}

// ---------------------------------------------------------------------------
// Score files: CSV with header presentation_id,label,score.

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace detail

inline std::vector<ScoreRecord> parse_scores(std::istream& in, ScorePolarity polarity = ScorePolarity::AttackHigh,
                                             std::string_view source = "scores") {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidScoreFile, std::string(source) + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) break;
  }
  const auto header = detail::split_csv_line(line);
  if (header != std::vector<std::string>{"presentation_id", "label", "score"}) {
    fail("header must be presentation_id,label,score");
  }
  std::vector<ScoreRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 3) fail("expected 3 fields");
    ScoreRecord r;
    r.presentation_id = f[0];
    try {
      std::size_t used = 0;
      r.label = std::stoi(f[1], &used);
      if (used != f[1].size()) fail("label is not an integer");
      r.score = std::stod(f[2], &used);
      if (used != f[2].size()) fail("score is not a number");
    } catch (const std::logic_error&) {
      fail("unparseable label or score");
    }
    if (r.label < 0) fail("label must be >= 0");
    if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0) fail("score must lie in [0, 1]");
    if (polarity == ScorePolarity::BonaFideHigh) r.score = 1.0 - r.score;
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ScoreRecord> read_scores(const std::filesystem::path& path,
                                            ScorePolarity polarity = ScorePolarity::AttackHigh) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return parse_scores(in, polarity, path.string());
}

}  // namespace padbench
