#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "padbench/padbench.hpp"
#include "padbench/log.hpp"

namespace padbench::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::SingularHomography:
    case ErrorCode::DegenerateConfiguration:
    case ErrorCode::NoConsensus:
    case ErrorCode::PointAtInfinity:
    case ErrorCode::AlignmentFailed:
    case ErrorCode::IndefiniteMatrix:
    case ErrorCode::KeypointTooCloseToBorder:
      return kExitProcessing;
    default:
      return kExitValidation;
  }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << json{{"error", code}, {"message", message}}.dump() << '\n';
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

/// Resolved option values of a subcommand, defaults included, keyed by the
/// long flag name.
json resolved_config(const CLI::App& sub) {
  json options = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      options[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& results = opt->results();
      options[name] = opt->get_expected_max() > 1 ? json(results) : json(results.back());
    } else {
      options[name] = opt->get_default_str();
    }
  }
  return {{"subcommand", sub.get_name()}, {"options", options}, {"version", "0.1.0"}};
}

void write_sidecar(const CLI::App& sub, const fs::path& path) {
  write_file_atomic(path, resolved_config(sub).dump(2) + "\n");
}

/// Sidecar next to a file output: <out>.config.json.
fs::path sidecar_for_file(const fs::path& out) {
  fs::path p = out;
  p += ".config.json";
  return p;
}

fs::path resolve_frame(const fs::path& root, const std::string& frame_path) {
  const fs::path p(frame_path);
  return p.is_absolute() ? p : root / p;
}

fs::path mirrored_png(const std::string& frame_path) {
  fs::path rel = fs::path(frame_path).relative_path();
  rel.replace_extension(".png");
  return rel;
}

ScorePolarity parse_polarity(const std::string& s) {
  if (s == "attack-high") return ScorePolarity::AttackHigh;
  if (s == "bonafide-high") return ScorePolarity::BonaFideHigh;
  throw Error(ErrorCode::InvalidScoreFile, "unknown score polarity '" + s + "'");
}

struct Common {
  bool json_output = false;
  std::uint64_t seed = 0;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  std::string polarity = "attack-high";
};

// ---------------------------------------------------------------------------

struct PreprocessArgs {
  std::string manifest, out, root;
  PreprocessConfig cfg;
  double max_fail_rate = 0.0;
};

int cmd_preprocess(const CLI::App& sub, const PreprocessArgs& a, const Common& c, std::ostream& out) {
  const Manifest manifest = load_manifest(a.manifest);
  a.cfg.validate();
  const fs::path root = a.root.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.root);
  const fs::path out_dir(a.out);
  fs::create_directories(out_dir);

  std::vector<const FrameRecord*> todo;
  for (const auto& r : manifest)
    if (r.in_frame) todo.push_back(&r);

  std::vector<std::string> failures(todo.size());
  parallel_for(todo.size(), c.jobs, [&](std::size_t i) {
    const auto& r = *todo[i];
    try {
      const ImageBuffer frame = load_image(resolve_frame(root, r.frame_path));
      save_image_atomic(preprocess_presentation(frame, r.quad, a.cfg), out_dir / mirrored_png(r.frame_path));
    } catch (const Error& e) {
      failures[i] = e.what();
      log::warn(r.frame_path + ": " + e.what());
    }
  });
  const auto failed = static_cast<std::size_t>(std::count_if(failures.begin(), failures.end(),
                                                             [](const std::string& s) { return !s.empty(); }));
  write_sidecar(sub, out_dir / "config.json");

  const double rate = todo.empty() ? 0.0 : static_cast<double>(failed) / static_cast<double>(todo.size());
  if (c.json_output) {
    out << json{{"processed", todo.size() - failed}, {"failed", failed}, {"skipped_out_of_frame", manifest.size() - todo.size()}}.dump()
        << '\n';
  } else {
    out << "processed  " << todo.size() - failed << "\nfailed     " << failed << "\nskipped    "
        << manifest.size() - todo.size() << '\n';
  }
  return rate > a.max_fail_rate ? kExitProcessing : kExitOk;
}

// ---------------------------------------------------------------------------

struct AlignArgs {
  std::string manifest, out, root, task = "print";
  PreprocessConfig cfg;
  AlignParams params;
  bool no_cross_check = false;
  double max_fail_rate = 0.5;
};

int cmd_align(const CLI::App& sub, AlignArgs a, const Common& c, std::ostream& out) {
  const Manifest manifest = load_manifest(a.manifest);
  const Task task = parse_task(a.task);
  a.cfg.validate();
  a.params.features.cross_check = !a.no_cross_check;
  a.params.ransac.seed = c.seed;
  const fs::path root = a.root.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.root);
  const fs::path out_dir(a.out);
  fs::create_directories(out_dir);

  const PairingResult pairing = pair_presentations(manifest, task, c.seed);
  if (pairing.skipped_subjects > 0) {
    log::warn(std::to_string(pairing.skipped_subjects) + " subject(s) without attack frames skipped");
  }

  struct Row {
    std::size_t inliers = 0;
    double mean_error = 0.0;
    std::string status;
  };
  std::vector<Row> rows(pairing.pairs.size());
  parallel_for(pairing.pairs.size(), c.jobs, [&](std::size_t i) {
    const auto& p = pairing.pairs[i];
    Row& row = rows[i];
    try {
      const ImageBuffer bona = preprocess_presentation(load_image(resolve_frame(root, p.bona.frame_path)), p.bona.quad, a.cfg);
      const ImageBuffer attack =
          preprocess_presentation(load_image(resolve_frame(root, p.attack.frame_path)), p.attack.quad, a.cfg);
      const auto outcome = try_align_attack_to_bonafide(bona, attack, a.params);
      row.inliers = outcome.report.inlier_count;
      row.mean_error = outcome.report.mean_error_px;
      if (!outcome.aligned) {
        row.status = "failed: " + outcome.failure;
        return;
      }
      const fs::path rel = mirrored_png(p.bona.frame_path);
      save_image_atomic(bona, out_dir / "bonafide" / rel);
      save_image_atomic(*outcome.aligned, out_dir / "attack" / rel);
      row.status = "ok";
    } catch (const Error& e) {
      row.status = std::string("failed: ") + e.what();
    }
  });

  std::string csv = "bona_path,attack_path,inliers,mean_error_px,status\n";
  std::size_t failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].status != "ok") ++failed;
    csv += csv_field(pairing.pairs[i].bona.frame_path) + "," + csv_field(pairing.pairs[i].attack.frame_path) + "," +
           std::to_string(rows[i].inliers) + "," + fixed(rows[i].mean_error, 4) + "," + csv_field(rows[i].status) + "\n";
  }
  write_file_atomic(out_dir / "pairs.csv", csv);
  write_sidecar(sub, out_dir / "config.json");

  const double rate = rows.empty() ? 0.0 : static_cast<double>(failed) / static_cast<double>(rows.size());
  if (c.json_output) {
    out << json{{"pairs", rows.size()}, {"failed", failed}, {"fail_rate", rate}, {"skipped_subjects", pairing.skipped_subjects}}
               .dump()
        << '\n';
  } else {
    out << "pairs      " << rows.size() << "\nfailed     " << failed << "\nfail rate  " << fixed(rate, 4) << '\n';
  }
  return rate > a.max_fail_rate ? kExitProcessing : kExitOk;
}

// ---------------------------------------------------------------------------

struct SplitArgs {
  std::string manifest, rules, out, task = "print";
};

json split_summary(const SplitAssignment& a) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& f : a.frames) {
    ++counts[std::string(to_string(f.split))][std::string(to_string(f.record.class_label))];
    if (f.half) ++counts[std::string(to_string(f.split)) + "/" + std::string(to_string(*f.half))][std::string(to_string(f.record.class_label))];
  }
  return counts;
}

int cmd_split(const CLI::App& sub, const SplitArgs& a, const Common& c, std::ostream& out) {
  const Manifest manifest = load_manifest(a.manifest);
  const RulesFile rules = load_rules(a.rules);
  const SplitAssignment assignment = partition_halves(build_splits(manifest, parse_task(a.task), rules), c.seed);
  const ValidationReport report = validate_assignment(assignment);

  if (!a.out.empty()) {
    const fs::path out_path(a.out);
    write_file_atomic(out_path, to_json(assignment).dump(1) + "\n");
    fs::path report_path = out_path;
    report_path.replace_extension(".validation.json");
    write_file_atomic(report_path, to_json(report).dump(2) + "\n");
    write_sidecar(sub, sidecar_for_file(out_path));
  } else {
    log::info(resolved_config(sub).dump());
  }

  const json summary = split_summary(assignment);
  if (c.json_output) {
    out << json{{"counts", summary}, {"validation", to_json(report)}}.dump() << '\n';
  } else {
    out << std::left << std::setw(18) << "partition" << std::setw(10) << "class" << "frames\n";
    for (const auto& [part, per_class] : summary.items())
      for (const auto& [cls, n] : per_class.items())
        out << std::setw(18) << part << std::setw(10) << cls << n.get<std::size_t>() << '\n';
    out << "violations " << report.violations.size() << '\n';
    for (const auto& v : report.violations) out << "  [" << v.kind << "] " << v.message << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ComposeArgs {
  std::string assignment, out, synth_dir, mode = "real-full";
};

int cmd_compose(const CLI::App& sub, const ComposeArgs& a, const Common& c, std::ostream& out) {
  const SplitAssignment assignment = assignment_from_json(read_json_file(a.assignment, ErrorCode::InvalidManifest));
  const CompositionMode mode = parse_mode(a.mode);
  std::optional<fs::path> synth;
  if (!a.synth_dir.empty()) synth = fs::path(a.synth_dir);
  const auto rows = compose_training_manifest(assignment, mode, synth);
  const std::string csv = listing_csv(rows);
  if (a.out.empty()) {
    out << csv;
    return kExitOk;
  }
  write_file_atomic(a.out, csv);
  write_sidecar(sub, sidecar_for_file(a.out));
  if (c.json_output) {
    out << json{{"rows", rows.size()}, {"mode", a.mode}}.dump() << '\n';
  } else {
    out << "rows  " << rows.size() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string scores, out;
  double threshold = 0.5;
};

json evaluate(const std::vector<ScoreRecord>& records, double threshold) {
  const DetCurve curve = compute_det(records);
  json j;
  j["eer"] = compute_eer(curve);
  json saturated = json::object();
  for (int ap : {10, 20, 100}) {
    const auto op = bpcer_at_ap(curve, ap);
    j["bpcer" + std::to_string(ap)] = op.bpcer;
    saturated["bpcer" + std::to_string(ap)] = op.saturated;
  }
  j["saturated"] = saturated;
  j["bona_fide_count"] = curve.bona_total;
  json pai = json::object();
  for (std::size_t k = 0; k < curve.pai_labels.size(); ++k) pai[std::to_string(curve.pai_labels[k])] = curve.pai_totals[k];
  j["attack_counts"] = pai;

  json per = json::object();
  for (const auto& [label, v] : apcer_per_pai(records, threshold)) per[std::to_string(label)] = v;
  j["apcer_per_pai"] = {{"threshold", threshold},
                        {"apcer", per},
                        {"apcer_max", apcer_max(records, threshold)},
                        {"bpcer", bpcer(records, threshold)}};
  return j;
}

int cmd_eval(const CLI::App& sub, const EvalArgs& a, const Common& c, std::ostream& out) {
  const auto records = read_scores(a.scores, parse_polarity(c.polarity));
  const json metrics = evaluate(records, a.threshold);
  if (!a.out.empty()) {
    write_file_atomic(a.out, metrics.dump(2) + "\n");
    write_sidecar(sub, sidecar_for_file(a.out));
  } else {
    log::info(resolved_config(sub).dump());
  }
  if (c.json_output) {
    out << metrics.dump() << '\n';
    return kExitOk;
  }
  out << std::left << std::setw(12) << "metric" << std::right << std::setw(10) << "value (%)" << '\n';
  out << std::left << std::setw(12) << "EER" << std::right << std::setw(10) << fixed(metrics["eer"], 2) << '\n';
  for (int ap : {10, 20, 100}) {
    const std::string key = "bpcer" + std::to_string(ap);
    out << std::left << std::setw(12) << ("BPCER" + std::to_string(ap)) << std::right << std::setw(10)
        << fixed(metrics[key], 2) << (metrics["saturated"][key].get<bool>() ? "  (saturated)" : "") << '\n';
  }
  const json& row = metrics["apcer_per_pai"];
  out << "\nAPCER at threshold " << row["threshold"].get<double>() << '\n';
  for (const auto& [label, v] : row["apcer"].items())
    out << std::left << std::setw(12) << ("  PAI " + label) << std::right << std::setw(10) << fixed(v, 2) << '\n';
  out << std::left << std::setw(12) << "  max" << std::right << std::setw(10) << fixed(row["apcer_max"], 2) << '\n';
  out << std::left << std::setw(12) << "  BPCER" << std::right << std::setw(10) << fixed(row["bpcer"], 2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DetArgs {
  std::vector<std::string> scores, labels;
  std::string out, format;
};

int cmd_det(const CLI::App& sub, const DetArgs& a, const Common& c, std::ostream& out) {
  if (!a.labels.empty() && a.labels.size() != a.scores.size()) {
    throw Error(ErrorCode::InvalidScoreFile, "--label must be given once per --scores file");
  }
  std::string format = a.format;
  if (format.empty()) format = fs::path(a.out).extension() == ".csv" ? "csv" : "svg";
  if (format != "csv" && format != "svg") throw Error(ErrorCode::InvalidScoreFile, "format must be csv or svg");

  std::vector<LabeledCurve> curves;
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    const std::string label = a.labels.empty() ? fs::path(a.scores[i]).stem().string() : a.labels[i];
    curves.push_back({label, compute_det(read_scores(a.scores[i], parse_polarity(c.polarity)))});
  }
  const fs::path out_path(a.out);
  std::vector<std::string> written;
  if (format == "svg") {
    write_file_atomic(out_path, det_svg(curves));
    written.push_back(out_path.string());
  } else if (curves.size() == 1) {
    write_file_atomic(out_path, det_csv(curves[0].curve));
    written.push_back(out_path.string());
  } else {
    for (const auto& lc : curves) {
      fs::path p = out_path;
      p.replace_extension("." + lc.label + ".csv");
      write_file_atomic(p, det_csv(lc.curve));
      written.push_back(p.string());
    }
  }
  write_sidecar(sub, sidecar_for_file(out_path));

  json eers = json::object();
  for (const auto& lc : curves) eers[lc.label] = compute_eer(lc.curve);
  if (c.json_output) {
    out << json{{"written", written}, {"eer", eers}}.dump() << '\n';
  } else {
    for (const auto& lc : curves) out << lc.label << " (" << fixed(compute_eer(lc.curve), 2) << "%)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FidArgs {
  std::string a, b, out;
};

int cmd_fid(const CLI::App& sub, const FidArgs& a, const Common& c, std::ostream& out) {
  const EmbeddingSet ea = read_embeddings(a.a);
  const EmbeddingSet eb = read_embeddings(a.b);
  if (ea.dim != eb.dim) {
    throw Error(ErrorCode::DimensionMismatch, "embedding dims differ: " + std::to_string(ea.dim) + " vs " + std::to_string(eb.dim));
  }
  const double fid = frechet_distance(gaussian_stats(ea), gaussian_stats(eb));
  if (!a.out.empty()) {
    write_file_atomic(a.out, json{{"fid", fid}, {"count_a", ea.count}, {"count_b", eb.count}, {"dim", ea.dim}}.dump(2) + "\n");
    write_sidecar(sub, sidecar_for_file(a.out));
  } else {
    log::info(resolved_config(sub).dump());
  }
  if (c.json_output) {
    out << json{{"fid", fid}}.dump() << '\n';
  } else {
    out << fixed(fid, 6) << '\n';
  }
  return kExitOk;
}

void add_preprocess_flags(CLI::App* sub, PreprocessConfig& cfg) {
  sub->add_option("--mask-margin", cfg.mask_margin, "Border (px) zeroed on the rectified image");
  sub->add_option("--rect-width", cfg.rect_width, "Rectified document width (px)");
  sub->add_option("--rect-height", cfg.rect_height, "Rectified document height (px)");
  sub->add_option("--crop-width", cfg.crop_width, "Centre crop width (px)");
  sub->add_option("--crop-height", cfg.crop_height, "Centre crop height (px)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"padbench: ID-card presentation attack detection benchmark toolkit", "padbench"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool seed, bool jobs, bool polarity) {
    sub->add_flag("--json", common.json_output, "Machine-readable JSON on standard output");
    if (seed) sub->add_option("--seed", common.seed, "Seed for every random draw");
    if (jobs) sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    if (polarity) {
      sub->add_option("--score-polarity", common.polarity,
                      "attack-high: higher score = more attack-like; bonafide-high: scores are mirrored")
          ->check(CLI::IsMember({"attack-high", "bonafide-high"}));
    }
  };

  PreprocessArgs pre;
  auto* sub_pre = app.add_subcommand("preprocess", "Rectify, mask and centre-crop every in-frame manifest record");
  sub_pre->add_option("--manifest", pre.manifest, "Manifest JSON")->required();
  sub_pre->add_option("--out", pre.out, "Output directory (mirrors frame paths, PNG)")->required();
  sub_pre->add_option("--root", pre.root, "Directory frame paths are relative to (default: manifest directory)");
  sub_pre->add_option("--max-fail-rate", pre.max_fail_rate, "Exit 3 when the failed fraction exceeds this");
  add_preprocess_flags(sub_pre, pre.cfg);
  add_common(sub_pre, false, true, false);

  AlignArgs al;
  auto* sub_al = app.add_subcommand("align", "Pair bona fide/attack frames per subject and align attacks onto bona fide");
  sub_al->add_option("--manifest", al.manifest, "Manifest JSON")->required();
  sub_al->add_option("--task", al.task, "Task")->check(CLI::IsMember({"print", "screen"}));
  sub_al->add_option("--out", al.out, "Output directory (bonafide/, attack/, pairs.csv)")->required();
  sub_al->add_option("--root", al.root, "Directory frame paths are relative to (default: manifest directory)");
  sub_al->add_option("--max-fail-rate", al.max_fail_rate, "Exit 3 when the AlignmentFailed fraction exceeds this");
  sub_al->add_option("--fast-threshold", al.params.features.fast_threshold, "FAST intensity threshold");
  sub_al->add_option("--max-keypoints", al.params.features.max_keypoints, "Keypoints kept per image");
  sub_al->add_option("--max-distance", al.params.features.max_distance, "Largest Hamming distance accepted");
  sub_al->add_flag("--no-cross-check", al.no_cross_check, "Keep non-mutual nearest neighbours");
  sub_al->add_option("--ransac-iterations", al.params.ransac.iterations, "RANSAC hypotheses");
  sub_al->add_option("--ransac-threshold", al.params.ransac.inlier_threshold, "Symmetric transfer error bound (px)");
  sub_al->add_option("--min-matches", al.params.min_matches, "Fewer matches reject the pair");
  sub_al->add_option("--max-mean-error", al.params.max_mean_error_px, "Larger mean inlier error (px) rejects the pair");
  add_preprocess_flags(sub_al, al.cfg);
  add_common(sub_al, true, true, false);

  SplitArgs sp;
  auto* sub_sp = app.add_subcommand("split", "Build subject-level splits and T_A/T_B halves");
  sub_sp->add_option("--manifest", sp.manifest, "Manifest JSON")->required();
  sub_sp->add_option("--rules", sp.rules, "Split rules JSON")->required();
  sub_sp->add_option("--task", sp.task, "Task")->check(CLI::IsMember({"print", "screen"}));
  sub_sp->add_option("--out", sp.out, "Assignment JSON (report goes to <out>.validation.json)");
  add_common(sub_sp, true, false, false);

  ComposeArgs co;
  auto* sub_co = app.add_subcommand("compose", "Write the training listing for a composition mode");
  sub_co->add_option("--assignment", co.assignment, "Assignment JSON from `split`")->required();
  sub_co->add_option("--mode", co.mode, "Composition")->check(CLI::IsMember({"real-half", "real-full", "synthetic"}));
  sub_co->add_option("--synth-dir", co.synth_dir, "Synthetic attacks mirroring T_B bona fide paths (synthetic mode)");
  sub_co->add_option("--out", co.out, "Listing CSV (default: standard output)");
  add_common(sub_co, false, false, false);

  EvalArgs ev;
  auto* sub_ev = app.add_subcommand("eval", "EER, BPCER10/20/100 and per-PAI APCER from a score file");
  sub_ev->add_option("--scores", ev.scores, "Score CSV (presentation_id,label,score)")->required();
  sub_ev->add_option("--out", ev.out, "Also write the metrics JSON here");
  sub_ev->add_option("--threshold", ev.threshold, "Decision threshold for the per-PAI APCER table (score >= threshold is attack)");
  add_common(sub_ev, false, false, true);

  DetArgs de;
  auto* sub_de = app.add_subcommand("det", "DET curves (CSV or SVG) for one or more score files");
  sub_de->add_option("--scores", de.scores, "Score CSV; repeat to overlay curves")->required();
  sub_de->add_option("--label", de.labels, "Legend label per score file (default: file stem)");
  sub_de->add_option("--out", de.out, "Output path")->required();
  sub_de->add_option("--format", de.format, "csv or svg (default: from --out extension)");
  add_common(sub_de, false, false, true);

  FidArgs fa;
  auto* sub_fid = app.add_subcommand("fid", "Frechet distance between two PADEMB1 embedding files");
  sub_fid->add_option("--a", fa.a, "First embedding file")->required();
  sub_fid->add_option("--b", fa.b, "Second embedding file")->required();
  sub_fid->add_option("--out", fa.out, "Also write a JSON result here");
  add_common(sub_fid, false, false, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // A subcommand's --help surfaces here as CallForHelp with the subcommand parsed.
    for (const auto* sub : app.get_subcommands()) {
      if (sub->get_option("--help")->count() > 0) {
        out << sub->help();
        return kExitOk;
      }
    }
    report_error(err, "UsageError", e.what());
    return kExitValidation;
  }

  try {
    if (sub_pre->parsed()) return cmd_preprocess(*sub_pre, pre, common, out);
    if (sub_al->parsed()) return cmd_align(*sub_al, al, common, out);
    if (sub_sp->parsed()) return cmd_split(*sub_sp, sp, common, out);
    if (sub_co->parsed()) return cmd_compose(*sub_co, co, common, out);
    if (sub_ev->parsed()) return cmd_eval(*sub_ev, ev, common, out);
    if (sub_de->parsed()) return cmd_det(*sub_de, de, common, out);
    if (sub_fid->parsed()) return cmd_fid(*sub_fid, fa, common, out);
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.detail());
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "IoError", e.what());
    return kExitProcessing;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitProcessing;
  }
  return kExitValidation;
}

}  // namespace padbench::cli
