#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "io.hpp"
#include "metrics.hpp"

namespace padbench {

namespace detail {

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace detail

/// threshold,apcer_max,bpcer,apcer_<j>... one row per curve point.
inline std::string det_csv(const DetCurve& curve) {
  std::ostringstream out;
  out << "threshold,apcer_max,bpcer";
  for (int label : curve.pai_labels) out << ",apcer_" << label;
  out << '\n';
  for (const auto& p : curve.points) {
    out << detail::format_double(p.threshold) << ',' << detail::format_double(p.apcer_max) << ','
        << detail::format_double(p.bpcer);
    for (double a : p.apcer) out << ',' << detail::format_double(a);
    out << '\n';
  }
  return out.str();
}

/// Rate columns of a DET CSV. Counts are not stored in the CSV, so only the
/// threshold and percentage fields of each point are populated.
inline DetCurve parse_det_csv(std::istream& in) {
  DetCurve curve;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidScoreFile, "empty DET CSV");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 3 || header[0] != "threshold" || header[1] != "apcer_max" || header[2] != "bpcer") {
    throw Error(ErrorCode::InvalidScoreFile, "bad DET CSV header");
  }
  for (std::size_t i = 3; i < header.size(); ++i) {
    if (header[i].rfind("apcer_", 0) != 0) throw Error(ErrorCode::InvalidScoreFile, "bad DET CSV column");
    curve.pai_labels.push_back(std::stoi(header[i].substr(6)));
  }
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != header.size()) throw Error(ErrorCode::InvalidScoreFile, "DET CSV row width mismatch");
    DetPoint p;
    p.threshold = detail::parse_double(f[0]);
    p.apcer_max = detail::parse_double(f[1]);
    p.bpcer = detail::parse_double(f[2]);
    for (std::size_t i = 3; i < f.size(); ++i) p.apcer.push_back(detail::parse_double(f[i]));
    curve.points.push_back(std::move(p));
  }
  return curve;
}

struct LabeledCurve {
  std::string label;
  DetCurve curve;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// DET plot on normal-deviate axes: probit(APCER) on x, probit(BPCER) on y,
/// one polyline per curve, dotted guides at APCER = 10 %, 5 % and 1 %, and a
/// legend entry "label (EER%)" per curve.
inline std::string det_svg(const std::vector<LabeledCurve>& curves) {
  constexpr double kMinRate = 0.01, kMaxRate = 99.99;  // percent; clamps 0 and 100
  constexpr double kWidth = 640, kHeight = 560, kLeft = 70, kRight = 20, kTop = 20, kBottom = 60;
  const double lo = probit(kMinRate / 100.0), hi = probit(kMaxRate / 100.0);
  auto sx = [&](double rate) {
    const double z = probit(std::clamp(rate, kMinRate, kMaxRate) / 100.0);
    return kLeft + (z - lo) / (hi - lo) * (kWidth - kLeft - kRight);
  };
  auto sy = [&](double rate) {
    const double z = probit(std::clamp(rate, kMinRate, kMaxRate) / 100.0);
    return kHeight - kBottom - (z - lo) / (hi - lo) * (kHeight - kTop - kBottom);
  };
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  svg << "<g id=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (double t : {0.1, 1.0, 5.0, 10.0, 20.0, 40.0, 60.0, 80.0, 95.0, 99.0}) {
    svg << "<line x1=\"" << sx(t) << "\" y1=\"" << sy(kMinRate) << "\" x2=\"" << sx(t) << "\" y2=\"" << sy(kMaxRate)
        << "\"/>\n";
    svg << "<line x1=\"" << sx(kMinRate) << "\" y1=\"" << sy(t) << "\" x2=\"" << sx(kMaxRate) << "\" y2=\"" << sy(t)
        << "\"/>\n";
    svg << "<text x=\"" << sx(t) << "\" y=\"" << (kHeight - kBottom + 14) << "\" text-anchor=\"middle\" stroke=\"none\">"
        << t << "</text>\n";
    svg << "<text x=\"" << (kLeft - 6) << "\" y=\"" << sy(t) + 3 << "\" text-anchor=\"end\" stroke=\"none\">" << t
        << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<g id=\"axes\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << (kWidth - kLeft - kRight) << "\" height=\""
      << (kHeight - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << (kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"" << (kHeight - 20)
      << "\" text-anchor=\"middle\">APCER (%)</text>\n"
      << "<text x=\"16\" y=\"" << (kTop + (kHeight - kTop - kBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (kTop + (kHeight - kTop - kBottom) / 2) << ")\">BPCER (%)</text>\n"
      << "</g>\n";

  svg << "<g id=\"operating-points\" stroke=\"red\" stroke-width=\"1\" stroke-dasharray=\"2,3\">\n";
  for (double ap : {10.0, 5.0, 1.0}) {
    svg << "<line x1=\"" << sx(ap) << "\" y1=\"" << sy(kMinRate) << "\" x2=\"" << sx(ap) << "\" y2=\"" << sy(kMaxRate)
        << "\"/>\n";
  }
  svg << "</g>\n";

  svg << "<g id=\"curves\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    svg << "<polyline stroke=\"" << kColors[i % std::size(kColors)] << "\" points=\"";
    bool first = true;
    for (const auto& p : curves[i].curve.points) {
      svg << (first ? "" : " ") << sx(p.apcer_max) << ',' << sy(p.bpcer);
      first = false;
    }
    svg << "\"/>\n";
  }
  svg << "</g>\n";

  svg << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double y = kTop + 16 + 16.0 * static_cast<double>(i);
    const double x = kWidth - kRight - 200;
    std::ostringstream label;
    label << std::fixed << std::setprecision(2) << curves[i].label << " (" << compute_eer(curves[i].curve) << "%)";
    svg << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 20 << "\" y2=\"" << y - 4 << "\" stroke=\""
        << kColors[i % std::size(kColors)] << "\" stroke-width=\"2\"/>\n";
    svg << "<text class=\"legend-entry\" x=\"" << x + 26 << "\" y=\"" << y << "\">" << detail::xml_escape(label.str())
        << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

enum class DetFormat { Csv, Svg };

inline void export_det(const DetCurve& curve, const std::filesystem::path& path, DetFormat format,
                       const std::string& label = "scores") {
  write_file_atomic(path, format == DetFormat::Csv ? det_csv(curve) : det_svg({{label, curve}}));
}

}  // namespace padbench
