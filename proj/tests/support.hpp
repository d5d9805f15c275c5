// Shared fixtures and independent oracles for the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "padbench/padbench.hpp"

namespace padbench::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("padbench_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline ImageBuffer random_image(std::mt19937_64& rng, std::uint32_t w, std::uint32_t h, std::uint32_t c) {
  ImageBuffer img(w, h, c);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(byte(rng));
  return img;
}

inline void add_noise(ImageBuffer& img, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(std::clamp(std::lround(v + n(rng)), 0L, 255L));
}

/// Grey checkerboard whose cells carry random levels, overlaid with random
/// discs and mild noise. Every cell junction is a usable FAST corner.
inline ImageBuffer textured_card(std::uint32_t w, std::uint32_t h, std::uint64_t seed, std::uint32_t cell = 32) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(20, 235);
  const std::uint32_t cols = w / cell + 1, rows = h / cell + 1;
  std::vector<int> levels(static_cast<std::size_t>(cols) * rows);
  for (auto& l : levels) l = level(rng);
  ImageBuffer img(w, h, 1);
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) img.at(x, y) = static_cast<std::uint8_t>(levels[(y / cell) * cols + x / cell]);

  std::uniform_real_distribution<double> ux(0, w), uy(0, h), ur(4, 14);
  for (int k = 0; k < 60; ++k) {
    const double cx = ux(rng), cy = uy(rng), r = ur(rng);
    const auto v = static_cast<std::uint8_t>(level(rng));
    for (int y = std::max(0, int(cy - r)); y <= std::min(int(h) - 1, int(cy + r)); ++y)
      for (int x = std::max(0, int(cx - r)); x <= std::min(int(w) - 1, int(cx + r)); ++x)
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.at(x, y) = v;
  }
  add_noise(img, 2.0, rng);
  return img;
}

// ---------------------------------------------------------------------------
// Long-double cyclic Jacobi eigensolver. Deliberately independent of Eigen's
// tridiagonal QR path.

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct JacobiResult {
  LVec values;
  LMat vectors;  // columns
};

inline JacobiResult jacobi_eigen(LMat a) {
  const Eigen::Index n = a.rows();
  LMat v = LMat::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0, total = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    if (off <= 1e-36L * total || off == 0) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const long double apq = a(p, q);
        if (apq == 0) continue;
        const long double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const long double t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const long double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const long double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const long double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const long double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {a.diagonal(), v};
}

inline LMat sqrt_psd_oracle(const LMat& m) {
  const auto r = jacobi_eigen(m);
  LVec roots = r.values.unaryExpr([](long double x) { return x > 0 ? std::sqrt(x) : 0.0L; });
  return r.vectors * roots.asDiagonal() * r.vectors.transpose();
}

inline long double trace_sqrt_oracle(const LMat& m) {
  long double t = 0;
  for (long double v : jacobi_eigen(m).values) t += v > 0 ? std::sqrt(v) : 0.0L;
  return t;
}

/// FID from long-double moments.
inline long double fid_from_moments(const LVec& mu_a, const LMat& sa, const LVec& mu_b, const LMat& sb) {
  const LMat ra = sqrt_psd_oracle(sa);
  const LMat inner = ra * sb * ra;
  return (mu_a - mu_b).squaredNorm() + sa.trace() + sb.trace() - 2 * trace_sqrt_oracle(0.5L * (inner + inner.transpose()));
}

inline std::pair<LVec, LMat> moments_oracle(const EmbeddingSet& e) {
  LVec mu = LVec::Zero(e.dim);
  for (std::uint32_t i = 0; i < e.count; ++i)
    for (std::uint32_t j = 0; j < e.dim; ++j) mu(j) += e.at(i, j);
  mu /= static_cast<long double>(e.count);
  LMat s = LMat::Zero(e.dim, e.dim);
  for (std::uint32_t i = 0; i < e.count; ++i) {
    LVec d(e.dim);
    for (std::uint32_t j = 0; j < e.dim; ++j) d(j) = e.at(i, j) - mu(j);
    s += d * d.transpose();
  }
  s /= static_cast<long double>(e.count - 1);
  return {mu, s};
}

inline long double fid_oracle(const EmbeddingSet& a, const EmbeddingSet& b) {
  const auto [ma, sa] = moments_oracle(a);
  const auto [mb, sb] = moments_oracle(b);
  return fid_from_moments(ma, sa, mb, sb);
}

inline EmbeddingSet gaussian_set(std::mt19937_64& rng, std::uint32_t n, std::uint32_t d, double shift, double spread) {
  EmbeddingSet e{n, d, std::vector<float>(static_cast<std::size_t>(n) * d)};
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> mix(static_cast<std::size_t>(d) * d);
  for (auto& m : mix) m = g(rng) * spread / std::sqrt(static_cast<double>(d));
  std::vector<double> z(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (auto& v : z) v = g(rng);
    for (std::uint32_t j = 0; j < d; ++j) {
      double s = shift;
      for (std::uint32_t k = 0; k < d; ++k) s += mix[static_cast<std::size_t>(j) * d + k] * z[k];
      e.data[static_cast<std::size_t>(i) * d + j] = static_cast<float>(s + 0.1 * z[j]);
    }
  }
  return e;
}

/// Low-rank integer embeddings X = Z P + m for a shared integer basis P
/// (k x D). Every value is an exactly representable float, so the population
/// moments of X follow from the latent moments of Z without rounding.
struct LatentSet {
  EmbeddingSet set;
  std::vector<std::int32_t> z;  // N x k
};

inline LatentSet latent_set(std::mt19937_64& rng, const std::vector<std::int32_t>& basis, std::uint32_t k,
                            std::uint32_t d, std::uint32_t n, const std::vector<std::int32_t>& scales,
                            const std::vector<std::int32_t>& offset) {
  LatentSet out;
  out.set = EmbeddingSet{n, d, std::vector<float>(static_cast<std::size_t>(n) * d)};
  out.z.resize(static_cast<std::size_t>(n) * k);
  std::uniform_int_distribution<int> u(-4, 4);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t l = 0; l < k; ++l) out.z[static_cast<std::size_t>(i) * k + l] = u(rng) * scales[l];
    for (std::uint32_t j = 0; j < d; ++j) {
      std::int64_t s = offset[j];
      for (std::uint32_t l = 0; l < k; ++l)
        s += static_cast<std::int64_t>(out.z[static_cast<std::size_t>(i) * k + l]) * basis[static_cast<std::size_t>(l) * d + j];
      out.set.data[static_cast<std::size_t>(i) * d + j] = static_cast<float>(s);
    }
  }
  return out;
}

/// FID oracle for two latent sets sharing `basis`, evaluated in the
/// k-dimensional latent space: with G = P P^T, the nonzero spectrum of
/// (P^T A P)(P^T B P) equals that of (G^1/2 A G^1/2)(G^1/2 B G^1/2).
inline long double latent_fid_oracle(const LatentSet& a, const LatentSet& b, const std::vector<std::int32_t>& basis,
                                     std::uint32_t k, std::uint32_t d, const std::vector<std::int32_t>& offset_a,
                                     const std::vector<std::int32_t>& offset_b) {
  auto latent_moments = [&](const LatentSet& s) {
    const std::uint32_t n = s.set.count;
    LVec mu = LVec::Zero(k);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t l = 0; l < k; ++l) mu(l) += s.z[static_cast<std::size_t>(i) * k + l];
    mu /= static_cast<long double>(n);
    LMat c = LMat::Zero(k, k);
    for (std::uint32_t i = 0; i < n; ++i) {
      LVec dz(k);
      for (std::uint32_t l = 0; l < k; ++l) dz(l) = s.z[static_cast<std::size_t>(i) * k + l] - mu(l);
      c += dz * dz.transpose();
    }
    c /= static_cast<long double>(n - 1);
    return std::pair{mu, c};
  };
  LMat p(k, d);
  for (std::uint32_t l = 0; l < k; ++l)
    for (std::uint32_t j = 0; j < d; ++j) p(l, j) = basis[static_cast<std::size_t>(l) * d + j];
  const LMat g = p * p.transpose();
  const LMat g_half = sqrt_psd_oracle(g);
  const auto [mua, ca] = latent_moments(a);
  const auto [mub, cb] = latent_moments(b);

  LVec mean_a = p.transpose() * mua, mean_b = p.transpose() * mub;
  for (std::uint32_t j = 0; j < d; ++j) {
    mean_a(j) += offset_a[j];
    mean_b(j) += offset_b[j];
  }
  const LMat sa = g_half * ca * g_half;
  const LMat sb = g_half * cb * g_half;
  const LMat ra = sqrt_psd_oracle(0.5L * (sa + sa.transpose()));
  const LMat inner = ra * sb * ra;
  return (mean_a - mean_b).squaredNorm() + (ca * g).trace() + (cb * g).trace() -
         2 * trace_sqrt_oracle(0.5L * (inner + inner.transpose()));
}

// ---------------------------------------------------------------------------
// Metrics: threshold grid t_g = g / 1e6, g = 0 .. 1e6 + 1. Scores must be of
// the form g / 1e6 so that the grid visits every distinct score.

inline constexpr std::int64_t kGridSteps = 1'000'000;

inline double grid_value(std::int64_t g) { return static_cast<double>(g) / static_cast<double>(kGridSteps); }

struct GridOracle {
  double eer = 0.0;
  std::map<int, double> bpcer_ap;  // ap -> value
};

inline GridOracle grid_oracle(const std::vector<ScoreRecord>& records, const std::vector<int>& aps) {
  std::vector<ScoreRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
  std::map<int, std::size_t> index;
  for (const auto& r : sorted)
    if (r.label > 0) index.emplace(r.label, 0);
  std::size_t next = 0;
  for (auto& [label, i] : index) i = next++;
  std::vector<std::int64_t> totals(index.size(), 0), missed(index.size(), 0);
  std::int64_t bona_total = 0, bona_rejected = 0;
  for (const auto& r : sorted) {
    if (r.label == 0) ++bona_total;
    else ++totals[index[r.label]];
  }
  bona_rejected = bona_total;

  struct State {
    double apcer, bpcer;
  };
  auto state = [&] {
    double worst = 0;
    for (std::size_t j = 0; j < totals.size(); ++j) worst = std::max(worst, 100.0 * missed[j] / totals[j]);
    return State{worst, 100.0 * bona_rejected / bona_total};
  };
  // Exact sign of APCER_max - BPCER.
  auto sign = [&] {
    int best = 0;
    for (std::size_t j = 0; j < totals.size(); ++j) {
      const __int128 l = static_cast<__int128>(missed[j]) * bona_total, r = static_cast<__int128>(bona_rejected) * totals[j];
      const int s = l < r ? -1 : (l > r ? 1 : 0);
      if (j == 0 || s > best) best = s;
    }
    return best;
  };
  auto within = [&](int ap) {
    for (std::size_t j = 0; j < totals.size(); ++j)
      if (missed[j] * ap > totals[j]) return false;
    return true;
  };

  GridOracle out;
  bool eer_done = false;
  std::map<int, bool> ap_done;
  std::map<int, State> ap_anchor;
  State prev{};
  std::size_t ptr = 0;
  for (std::int64_t g = 0; g <= kGridSteps + 1; ++g) {
    const double t = grid_value(g);
    const std::size_t before = ptr;
    for (; ptr < sorted.size() && sorted[ptr].score < t; ++ptr) {
      if (sorted[ptr].label == 0) --bona_rejected;
      else ++missed[index[sorted[ptr].label]];
    }
    // Counts, and with them every decision below, only change when a score is crossed.
    if (g > 0 && ptr == before) continue;
    const State cur = state();
    if (!eer_done) {
      const int s = sign();
      if (s == 0) {
        out.eer = cur.apcer;
        eer_done = true;
      } else if (s > 0) {
        if (g == 0) {
          out.eer = cur.apcer;
        } else {
          const double d0 = prev.apcer - prev.bpcer, d1 = cur.apcer - cur.bpcer;
          out.eer = prev.apcer + (-d0 / (d1 - d0)) * (cur.apcer - prev.apcer);
        }
        eer_done = true;
      }
    }
    for (int ap : aps) {
      if (ap_done[ap]) continue;
      if (within(ap)) {
        ap_anchor[ap] = cur;
        continue;
      }
      const State a = ap_anchor[ap];
      const double target = 100.0 / ap;
      double v = a.bpcer;
      if (a.apcer < target) v = a.bpcer + (target - a.apcer) / (cur.apcer - a.apcer) * (cur.bpcer - a.bpcer);
      out.bpcer_ap[ap] = v;
      ap_done[ap] = true;
    }
    prev = cur;
  }
  if (!eer_done) out.eer = prev.apcer;
  for (int ap : aps)
    if (!ap_done[ap]) out.bpcer_ap[ap] = ap_anchor[ap].bpcer;
  return out;
}

/// Random score file: 10-500 records, 1-3 attack types, scores on the 1e-4
/// lattice expressed exactly as grid values.
inline std::vector<ScoreRecord> random_scores(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(10, 500), pais(1, 3);
  const int n = size(rng), k = pais(rng);
  std::uniform_int_distribution<int> label(0, k);
  std::normal_distribution<double> shift(0.0, 0.25);
  const double sep = std::abs(shift(rng));
  std::vector<ScoreRecord> out;
  for (int i = 0; i < n; ++i) {
    int l = i < 1 ? 0 : (i <= k ? i : label(rng));
    // Attack scores lean high by a random margin so curves cover easy and hard cases.
    const double centre = l == 0 ? 0.5 - sep : 0.5 + sep * (0.5 + 0.5 * l / k);
    std::normal_distribution<double> s(centre, 0.2);
    const auto q = std::clamp<std::int64_t>(std::llround(s(rng) * 10'000), 0, 10'000);
    out.push_back({"p" + std::to_string(i), l, grid_value(q * 100)});
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Standard normal quantile in long double: Newton on the long-double
/// erfc-based CDF, iterated to convergence from the rational approximation.
inline long double probit_oracle(double p) {
  const bool upper = p > 0.5;
  const long double q = upper ? 1.0L - static_cast<long double>(p) : static_cast<long double>(p);
  long double x = detail::acklam_lower(static_cast<double>(q));
  for (int i = 0; i < 60; ++i) {
    const long double cdf = 0.5L * std::erfc(-x / std::sqrt(2.0L));
    const long double pdf = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    const long double step = (cdf - q) / pdf;
    x -= step;
    if (std::fabs(step) < 1e-18L * std::max(1.0L, std::fabs(x))) break;
  }
  return upper ? -x : x;
}

// ---------------------------------------------------------------------------
// Manifests.

inline FrameRecord make_record(SourceDataset ds, DocType dt, const std::string& subject, ClassLabel label,
                               const std::string& path, bool in_frame = true) {
  FrameRecord r;
  r.source_dataset = ds;
  r.doc_type = dt;
  r.subject_id = subject;
  r.class_label = label;
  r.frame_path = path;
  r.in_frame = in_frame;
  r.quad.corners = {{{10, 10}, {110, 12}, {108, 170}, {12, 168}}};
  return r;
}

inline std::string two_digit(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

inline constexpr std::array<DocType, 5> kAllDocTypes = {DocType::AlbId, DocType::EspId, DocType::EstId, DocType::FinId,
                                                        DocType::SvkId};

/// Per-class frame counts (bona fide, attack) for train / validation / test.
struct SplitCounts {
  std::array<std::size_t, 3> bona;
  std::array<std::size_t, 3> attack;
};

inline SplitCounts published_counts(Task task) {
  if (task == Task::Print) return {{6782, 3285, 3317}, {6720, 3212, 3386}};
  return {{4066, 3224, 3633}, {3891, 3239, 3596}};
}

/// Synthetic manifest whose in-rule frames reproduce the published per-class
/// split sizes. Subjects come from the rules; frames are spread evenly over
/// them. Distractors the rules must drop are mixed in: out-of-frame frames,
/// subjects matched only by "*", the other attack class and MIDV attacks.
inline Manifest protocol_manifest(Task task, const RulesFile& rules) {
  const SplitRules& r = rules.at(task);
  const ClassLabel attack = attack_class(task);
  const ClassLabel other = task == Task::Print ? ClassLabel::Screen : ClassLabel::Print;
  std::array<std::vector<std::tuple<SourceDataset, DocType, std::string>>, 3> bona_subjects, attack_subjects;
  for (const auto& [cell, subjects] : r.cells)
    for (const auto& [subject, split] : subjects) {
      if (subject == "*" || split == "exclude") continue;
      const auto s = static_cast<std::size_t>(*detail::kSplits.parse(split));
      bona_subjects[s].push_back({cell.first, cell.second, subject});
      if (cell.first == SourceDataset::Dlc2021) attack_subjects[s].push_back({cell.first, cell.second, subject});
    }

  Manifest m;
  auto emit = [&](const std::tuple<SourceDataset, DocType, std::string>& subj, ClassLabel cls, std::size_t n,
                  bool in_frame = true) {
    const auto& [ds, dt, id] = subj;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string path = std::string(to_string(ds)) + "/" + std::string(to_string(dt)) + "/" + id + "/" +
                               std::string(to_string(cls)) + (in_frame ? "/f" : "/out") + std::to_string(i) + ".jpg";
      m.push_back(make_record(ds, dt, id, cls, path, in_frame));
    }
  };
  auto spread = [&](const auto& subjects, ClassLabel cls, std::size_t total) {
    const std::size_t base = total / subjects.size(), extra = total % subjects.size();
    for (std::size_t i = 0; i < subjects.size(); ++i) emit(subjects[i], cls, base + (i < extra ? 1 : 0));
  };
  const SplitCounts counts = published_counts(task);
  for (std::size_t s = 0; s < 3; ++s) {
    spread(bona_subjects[s], ClassLabel::BonaFide, counts.bona[s]);
    spread(attack_subjects[s], attack, counts.attack[s]);
    for (const auto& subj : attack_subjects[s]) {
      emit(subj, other, 3);
      emit(subj, attack, 2, false);
      emit(subj, ClassLabel::BonaFide, 1, false);
    }
    for (const auto& subj : bona_subjects[s])
      if (std::get<0>(subj) == SourceDataset::Midv2020) emit(subj, attack, 2);
  }
  for (const DocType dt : kAllDocTypes) {
    emit({SourceDataset::Dlc2021, dt, "09"}, ClassLabel::BonaFide, 4);
    emit({SourceDataset::Dlc2021, dt, "09"}, attack, 4);
    emit({SourceDataset::Midv2020, dt, "49"}, ClassLabel::BonaFide, 4);
  }
  emit({SourceDataset::Midv2020, DocType::AlbId, "35"}, ClassLabel::BonaFide, 40);
  return m;
}

}  // namespace padbench::testing
