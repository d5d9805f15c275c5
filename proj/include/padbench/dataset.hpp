#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "imaging.hpp"
#include "rng.hpp"

namespace padbench {

enum class DocType { AlbId, EspId, EstId, FinId, SvkId };
enum class SourceDataset { Midv2020, Dlc2021 };
enum class ClassLabel { BonaFide, Print, Screen };
enum class Task { Print, Screen };
enum class Split { Train, Validation, Test };
enum class Half { A, B };
enum class CompositionMode { RealHalf, RealFull, Synthetic };

namespace detail {

template <typename E, std::size_t N>
struct EnumNames {
  std::array<std::pair<E, std::string_view>, N> entries;

  std::string_view name(E e) const {
    for (const auto& [v, n] : entries)
      if (v == e) return n;
    return "?";
  }
  std::optional<E> parse(std::string_view s) const {
    for (const auto& [v, n] : entries)
      if (n == s) return v;
    return std::nullopt;
  }
};

inline constexpr EnumNames<DocType, 5> kDocTypes{{{{DocType::AlbId, "alb_id"},
                                                   {DocType::EspId, "esp_id"},
                                                   {DocType::EstId, "est_id"},
                                                   {DocType::FinId, "fin_id"},
                                                   {DocType::SvkId, "svk_id"}}}};
inline constexpr EnumNames<SourceDataset, 2> kDatasets{
    {{{SourceDataset::Midv2020, "midv2020"}, {SourceDataset::Dlc2021, "dlc2021"}}}};
inline constexpr EnumNames<ClassLabel, 3> kClasses{
    {{{ClassLabel::BonaFide, "bonafide"}, {ClassLabel::Print, "print"}, {ClassLabel::Screen, "screen"}}}};
inline constexpr EnumNames<Task, 2> kTasks{{{{Task::Print, "print"}, {Task::Screen, "screen"}}}};
inline constexpr EnumNames<Split, 3> kSplits{
    {{{Split::Train, "train"}, {Split::Validation, "validation"}, {Split::Test, "test"}}}};
inline constexpr EnumNames<Half, 2> kHalves{{{{Half::A, "T_A"}, {Half::B, "T_B"}}}};
inline constexpr EnumNames<CompositionMode, 3> kModes{{{{CompositionMode::RealHalf, "real-half"},
                                                        {CompositionMode::RealFull, "real-full"},
                                                        {CompositionMode::Synthetic, "synthetic"}}}};

template <typename E, std::size_t N>
E parse_or_throw(const EnumNames<E, N>& names, std::string_view s, ErrorCode code, std::string_view what) {
  if (auto v = names.parse(s)) return *v;
  throw Error(code, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace detail

inline std::string_view to_string(DocType v) { return detail::kDocTypes.name(v); }
inline std::string_view to_string(SourceDataset v) { return detail::kDatasets.name(v); }
inline std::string_view to_string(ClassLabel v) { return detail::kClasses.name(v); }
inline std::string_view to_string(Task v) { return detail::kTasks.name(v); }
inline std::string_view to_string(Split v) { return detail::kSplits.name(v); }
inline std::string_view to_string(Half v) { return detail::kHalves.name(v); }
inline std::string_view to_string(CompositionMode v) { return detail::kModes.name(v); }

inline Task parse_task(std::string_view s) {
  return detail::parse_or_throw(detail::kTasks, s, ErrorCode::InvalidManifest, "task");
}
inline CompositionMode parse_mode(std::string_view s) {
  return detail::parse_or_throw(detail::kModes, s, ErrorCode::InvalidManifest, "composition mode");
}

/// The attack class a task discriminates against bona fide.
inline ClassLabel attack_class(Task task) { return task == Task::Print ? ClassLabel::Print : ClassLabel::Screen; }

struct FrameRecord {
  std::string subject_id;
  DocType doc_type = DocType::AlbId;
  SourceDataset source_dataset = SourceDataset::Midv2020;
  ClassLabel class_label = ClassLabel::BonaFide;
  std::string frame_path;
  Quad quad;
  bool in_frame = true;
};

using Manifest = std::vector<FrameRecord>;

/// Subjects are numbered per dataset and document type, so identity is the
/// triple, rendered as "dataset/doc_type/subject".
inline std::string subject_key(const FrameRecord& r) {
  return std::string(to_string(r.source_dataset)) + "/" + std::string(to_string(r.doc_type)) + "/" + r.subject_id;
}

inline FrameRecord frame_record_from_json(const nlohmann::json& j) {
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) throw Error(ErrorCode::InvalidManifest, std::string("record missing field '") + name + "'");
    return j.at(name);
  };
  FrameRecord r;
  try {
    r.subject_id = field("subject_id").get<std::string>();
    r.doc_type = detail::parse_or_throw(detail::kDocTypes, field("doc_type").get<std::string>(),
                                        ErrorCode::InvalidManifest, "doc_type");
    r.source_dataset = detail::parse_or_throw(detail::kDatasets, field("source_dataset").get<std::string>(),
                                              ErrorCode::InvalidManifest, "source_dataset");
    r.class_label = detail::parse_or_throw(detail::kClasses, field("class_label").get<std::string>(),
                                           ErrorCode::InvalidManifest, "class_label");
    r.frame_path = field("frame_path").get<std::string>();
    const auto& q = field("quad");
    if (!q.is_array() || q.size() != 8) throw Error(ErrorCode::InvalidManifest, "quad must hold 8 numbers");
    for (std::size_t i = 0; i < 4; ++i) r.quad.corners[i] = {q[2 * i].get<double>(), q[2 * i + 1].get<double>()};
    r.in_frame = field("in_frame").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidManifest, e.what());
  }
  return r;
}

inline nlohmann::json to_json(const FrameRecord& r) {
  nlohmann::json quad = nlohmann::json::array();
  for (const auto& c : r.quad.corners) {
    quad.push_back(c.x);
    quad.push_back(c.y);
  }
  return {{"subject_id", r.subject_id},
          {"doc_type", to_string(r.doc_type)},
          {"source_dataset", to_string(r.source_dataset)},
          {"class_label", to_string(r.class_label)},
          {"frame_path", r.frame_path},
          {"quad", quad},
          {"in_frame", r.in_frame}};
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidManifest, "manifest must be a JSON array");
  Manifest m;
  m.reserve(j.size());
  for (const auto& item : j) m.push_back(frame_record_from_json(item));
  return m;
}

inline nlohmann::json to_json(const Manifest& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : m) j.push_back(to_json(r));
  return j;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path, ErrorCode code) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(code, path.string() + ": " + e.what());
  }
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path, ErrorCode::InvalidManifest));
}

// ---------------------------------------------------------------------------
// Split rules: {task: {source_dataset: {doc_type: {subject_id: split}}}}.
// A split value is "train", "validation", "test" or "exclude"; the subject key
// "*" supplies the value for subjects not listed explicitly.

using SubjectRules = std::map<std::string, std::string>;

struct SplitRules {
  // (dataset, doc_type) -> subject -> split-or-exclude
  std::map<std::pair<SourceDataset, DocType>, SubjectRules> cells;

  /// nullopt: no rule (coverage gap). Some(nullopt): excluded.
  std::optional<std::optional<Split>> lookup(SourceDataset ds, DocType dt, const std::string& subject) const {
    const auto cell = cells.find({ds, dt});
    if (cell == cells.end()) return std::nullopt;
    auto it = cell->second.find(subject);
    if (it == cell->second.end()) it = cell->second.find("*");
    if (it == cell->second.end()) return std::nullopt;
    if (it->second == "exclude") return std::optional<Split>{};
    return std::optional<Split>{*detail::kSplits.parse(it->second)};
  }
};

using RulesFile = std::map<Task, SplitRules>;

inline RulesFile rules_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidRules, "rules must be a JSON object");
  RulesFile out;
  for (const auto& [task_name, per_ds] : j.items()) {
    const Task task = detail::parse_or_throw(detail::kTasks, task_name, ErrorCode::InvalidRules, "task");
    SplitRules rules;
    if (!per_ds.is_object()) throw Error(ErrorCode::InvalidRules, "task entry must be an object");
    for (const auto& [ds_name, per_doc] : per_ds.items()) {
      const auto ds = detail::parse_or_throw(detail::kDatasets, ds_name, ErrorCode::InvalidRules, "source_dataset");
      if (!per_doc.is_object()) throw Error(ErrorCode::InvalidRules, "dataset entry must be an object");
      for (const auto& [doc_name, per_subject] : per_doc.items()) {
        const auto dt = detail::parse_or_throw(detail::kDocTypes, doc_name, ErrorCode::InvalidRules, "doc_type");
        if (!per_subject.is_object()) throw Error(ErrorCode::InvalidRules, "doc_type entry must be an object");
        SubjectRules subjects;
        for (const auto& [subject, split] : per_subject.items()) {
          if (!split.is_string()) throw Error(ErrorCode::InvalidRules, "split value must be a string");
          const auto value = split.get<std::string>();
          if (value != "exclude" && !detail::kSplits.parse(value)) {
            throw Error(ErrorCode::InvalidRules, "unknown split '" + value + "'");
          }
          subjects[subject] = value;
        }
        rules.cells[{ds, dt}] = std::move(subjects);
      }
    }
    out[task] = std::move(rules);
  }
  return out;
}

inline RulesFile load_rules(const std::filesystem::path& path) {
  return rules_from_json(read_json_file(path, ErrorCode::InvalidRules));
}

// ---------------------------------------------------------------------------

struct AssignedFrame {
  FrameRecord record;
  Split split = Split::Train;
  std::optional<Half> half;  ///< Set on train frames after partition_halves.
};

struct SplitAssignment {
  Task task = Task::Print;
  std::vector<AssignedFrame> frames;
  std::optional<std::uint64_t> half_seed;
};

inline nlohmann::json to_json(const SplitAssignment& a) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : a.frames) {
    auto j = to_json(f.record);
    j["split"] = to_string(f.split);
    j["half"] = f.half ? nlohmann::json(to_string(*f.half)) : nlohmann::json(nullptr);
    frames.push_back(std::move(j));
  }
  nlohmann::json out = {{"task", to_string(a.task)}, {"frames", frames}};
  out["half_seed"] = a.half_seed ? nlohmann::json(*a.half_seed) : nlohmann::json(nullptr);
  return out;
}

inline SplitAssignment assignment_from_json(const nlohmann::json& j) {
  SplitAssignment a;
  try {
    a.task = detail::parse_or_throw(detail::kTasks, j.at("task").get<std::string>(), ErrorCode::InvalidManifest,
                                    "task");
    if (j.contains("half_seed") && !j.at("half_seed").is_null()) a.half_seed = j.at("half_seed").get<std::uint64_t>();
    for (const auto& f : j.at("frames")) {
      AssignedFrame af;
      af.record = frame_record_from_json(f);
      af.split = detail::parse_or_throw(detail::kSplits, f.at("split").get<std::string>(),
                                        ErrorCode::InvalidManifest, "split");
      if (f.contains("half") && !f.at("half").is_null()) {
        af.half = detail::parse_or_throw(detail::kHalves, f.at("half").get<std::string>(),
                                         ErrorCode::InvalidManifest, "half");
      }
      a.frames.push_back(std::move(af));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidManifest, std::string("assignment: ") + e.what());
  }
  return a;
}

/// Assigns every in-frame record of the task's two classes to a split per
/// the rules. Bona fide frames come from both datasets; attack frames only
/// from DLC-2021.
inline SplitAssignment build_splits(const Manifest& manifest, Task task, const RulesFile& rules_file) {
  const auto rules_it = rules_file.find(task);
  if (rules_it == rules_file.end()) {
    throw Error(ErrorCode::InvalidRules, "rules have no entry for task '" + std::string(to_string(task)) + "'");
  }
  const SplitRules& rules = rules_it->second;

  std::set<std::tuple<SourceDataset, DocType, std::string>> present;
  for (const auto& r : manifest) present.insert({r.source_dataset, r.doc_type, r.subject_id});
  for (const auto& [cell, subjects] : rules.cells) {
    for (const auto& [subject, split] : subjects) {
      if (subject == "*" || split == "exclude") continue;
      if (!present.count({cell.first, cell.second, subject})) {
        throw Error(ErrorCode::UnknownSubjectInRules, std::string(to_string(cell.first)) + "/" +
                                                          std::string(to_string(cell.second)) + "/" + subject +
                                                          " is not in the manifest");
      }
    }
  }

  const ClassLabel attack = attack_class(task);
  SplitAssignment out;
  out.task = task;
  for (const auto& r : manifest) {
    if (!r.in_frame) continue;
    if (r.class_label != ClassLabel::BonaFide && r.class_label != attack) continue;
    if (r.class_label == attack && r.source_dataset != SourceDataset::Dlc2021) continue;
    const auto rule = rules.lookup(r.source_dataset, r.doc_type, r.subject_id);
    if (!rule) throw Error(ErrorCode::RuleCoverageGap, "no rule for subject " + subject_key(r));
    if (!*rule) continue;
    out.frames.push_back({r, **rule, std::nullopt});
  }
  return out;
}

/// Splits the train frames of each class into halves T_A / T_B: frames are
/// ordered by path, shuffled with SplitMix64(seed) (bona fide first, then the
/// attack class), and the first floor(n/2) go to T_A.
inline SplitAssignment partition_halves(SplitAssignment assignment, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (const ClassLabel cls : {ClassLabel::BonaFide, attack_class(assignment.task)}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < assignment.frames.size(); ++i) {
      const auto& f = assignment.frames[i];
      if (f.split == Split::Train && f.record.class_label == cls) idx.push_back(i);
    }
    if (idx.empty()) {
      throw Error(ErrorCode::EmptyTrainSplit, "no train frames of class '" + std::string(to_string(cls)) + "'");
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return assignment.frames[a].record.frame_path < assignment.frames[b].record.frame_path;
    });
    shuffle(std::span(idx), rng);
    const std::size_t half_a = idx.size() / 2;
    for (std::size_t k = 0; k < idx.size(); ++k) assignment.frames[idx[k]].half = k < half_a ? Half::A : Half::B;
  }
  assignment.half_seed = seed;
  return assignment;
}

struct Violation {
  std::string kind;  ///< subject_disjointness | min_subjects | class_balance | half_balance
  std::string message;
  std::string subject;
  double ratio = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations) {
    nlohmann::json item = {{"kind", x.kind}, {"message", x.message}};
    if (!x.subject.empty()) item["subject"] = x.subject;
    if (x.kind == "class_balance") item["ratio"] = x.ratio;
    v.push_back(std::move(item));
  }
  return {{"ok", r.ok()}, {"violations", v}};
}

inline constexpr double kMaxClassImbalance = 1.1;

/// Checks subject disjointness, >= 2 subjects per (split, doc_type, class),
/// class balance within each split (max/min <= 1.1) and |T_A| vs |T_B| per
/// class when halves are assigned.
inline ValidationReport validate_assignment(const SplitAssignment& a) {
  ValidationReport report;
  const std::array<ClassLabel, 2> classes{ClassLabel::BonaFide, attack_class(a.task)};

  std::map<std::string, std::set<Split>> subject_splits;
  for (const auto& f : a.frames) subject_splits[subject_key(f.record)].insert(f.split);
  for (const auto& [subject, splits] : subject_splits) {
    if (splits.size() > 1) {
      std::string names;
      for (auto s : splits) names += (names.empty() ? "" : ", ") + std::string(to_string(s));
      report.violations.push_back({"subject_disjointness", "subject " + subject + " appears in " + names, subject, 0.0});
    }
  }

  std::set<DocType> doc_types;
  for (const auto& f : a.frames) doc_types.insert(f.record.doc_type);
  for (const Split split : {Split::Train, Split::Validation, Split::Test}) {
    std::map<ClassLabel, std::size_t> counts;
    std::map<std::pair<DocType, ClassLabel>, std::set<std::string>> subjects;
    bool any = false;
    for (const auto& f : a.frames) {
      if (f.split != split) continue;
      any = true;
      ++counts[f.record.class_label];
      subjects[{f.record.doc_type, f.record.class_label}].insert(subject_key(f.record));
    }
    if (!any) continue;
    for (const DocType dt : doc_types) {
      for (const ClassLabel cls : classes) {
        const std::size_t n = subjects[{dt, cls}].size();
        if (n < 2) {
          report.violations.push_back({"min_subjects",
                                       std::string(to_string(split)) + "/" + std::string(to_string(dt)) + "/" +
                                           std::string(to_string(cls)) + " has " + std::to_string(n) +
                                           " subject(s), need >= 2",
                                       "", 0.0});
        }
      }
    }
    const double c0 = static_cast<double>(counts[classes[0]]);
    const double c1 = static_cast<double>(counts[classes[1]]);
    const double lo = std::min(c0, c1), hi = std::max(c0, c1);
    const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (ratio > kMaxClassImbalance) {
      std::ostringstream msg;
      msg << to_string(split) << " class counts " << c0 << " vs " << c1 << " (ratio " << ratio << ")";
      report.violations.push_back({"class_balance", msg.str(), "", ratio});
    }
  }

  for (const ClassLabel cls : classes) {
    std::size_t na = 0, nb = 0;
    for (const auto& f : a.frames) {
      if (f.split != Split::Train || f.record.class_label != cls || !f.half) continue;
      (*f.half == Half::A ? na : nb) += 1;
    }
    if (na + nb > 0 && (na > nb + 1 || nb > na + 1)) {
      report.violations.push_back({"half_balance",
                                   std::string(to_string(cls)) + " halves " + std::to_string(na) + " / " +
                                       std::to_string(nb),
                                   "", 0.0});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

struct ListingRow {
  std::string path;
  ClassLabel class_label = ClassLabel::BonaFide;
  bool synthetic = false;

  friend bool operator==(const ListingRow&, const ListingRow&) = default;
};

/// Where the synthetic attack generated from a T_B bona fide frame is
/// expected: the frame's relative path mirrored under `synth_dir`, with a
/// .png extension.
inline std::filesystem::path synthetic_path_for(const std::filesystem::path& synth_dir, const std::string& frame_path) {
  std::filesystem::path rel = std::filesystem::path(frame_path).relative_path();
  rel.replace_extension(".png");
  return synth_dir / rel;
}

namespace detail {

inline bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace detail

/// Builds the training listing for one of the three compositions:
/// real-half = T_A, real-full = T_A + T_B, synthetic = T_A + T_B bona fide +
/// one synthetic attack per T_B bona fide frame.
inline std::vector<ListingRow> compose_training_manifest(const SplitAssignment& a, CompositionMode mode,
                                                         const std::optional<std::filesystem::path>& synth_dir) {
  std::vector<const AssignedFrame*> train_a, train_b;
  for (const auto& f : a.frames) {
    if (f.split != Split::Train) continue;
    if (!f.half) throw Error(ErrorCode::EmptyTrainSplit, "train halves not assigned; run partition_halves first");
    (*f.half == Half::A ? train_a : train_b).push_back(&f);
  }
  auto by_path = [](const AssignedFrame* x, const AssignedFrame* y) { return x->record.frame_path < y->record.frame_path; };
  std::stable_sort(train_a.begin(), train_a.end(), by_path);
  std::stable_sort(train_b.begin(), train_b.end(), by_path);

  std::vector<ListingRow> rows;
  for (const auto* f : train_a) rows.push_back({f->record.frame_path, f->record.class_label, false});
  if (mode == CompositionMode::RealHalf) return rows;
  if (mode == CompositionMode::RealFull) {
    for (const auto* f : train_b) rows.push_back({f->record.frame_path, f->record.class_label, false});
    return rows;
  }

  if (!synth_dir || !std::filesystem::is_directory(*synth_dir)) {
    throw Error(ErrorCode::MissingSyntheticFile, "synthetic mode needs an existing synthetic image directory");
  }
  std::size_t bona_b = 0;
  std::vector<ListingRow> synthetic_rows;
  for (const auto* f : train_b) {
    if (f->record.class_label != ClassLabel::BonaFide) continue;
    ++bona_b;
    rows.push_back({f->record.frame_path, f->record.class_label, false});
    const auto synth = synthetic_path_for(*synth_dir, f->record.frame_path);
    if (!std::filesystem::is_regular_file(synth)) {
      throw Error(ErrorCode::MissingSyntheticFile, "missing synthetic image " + synth.string() + " for " +
                                                       f->record.frame_path);
    }
    synthetic_rows.push_back({synth.string(), attack_class(a.task), true});
  }
  std::size_t on_disk = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(*synth_dir)) {
    if (entry.is_regular_file() && detail::is_image_file(entry.path())) ++on_disk;
  }
  if (on_disk != bona_b) {
    throw Error(ErrorCode::SyntheticCountMismatch, std::to_string(on_disk) + " synthetic images on disk, expected " +
                                                       std::to_string(bona_b));
  }
  rows.insert(rows.end(), synthetic_rows.begin(), synthetic_rows.end());
  return rows;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string listing_csv(const std::vector<ListingRow>& rows) {
  std::string out = "path,class_label,origin\n";
  for (const auto& r : rows) {
    out += csv_field(r.path) + "," + std::string(to_string(r.class_label)) + "," +
           (r.synthetic ? "synthetic" : "real") + "\n";
  }
  return out;
}

}  // namespace padbench
