// SPDX-License-Identifier: Apache-2.0

#include "optsweep/render.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace optsweep {

std::string format_pct(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", pct);
  return buf;
}

std::string render_report_text(const std::vector<ReportCluster>& clusters,
                               const std::string& level) {
  const std::array<std::string, 5> header = {
      "Benchmark ID", "First Config. Better than " + level,
      "Config. Removing Gains", "Best Overall Config.",
      "Execution Time Reduction %"};
  std::vector<std::array<std::string, 5>> lines;
  for (const auto& c : clusters) {
    for (const auto& r : c.rows) {
      lines.push_back({r.benchmark_id, r.first_better, r.gains_removing,
                       r.best_overall, format_pct(r.exec_reduction_pct)});
    }
  }

  std::array<size_t, 5> width{};
  for (size_t i = 0; i < 5; ++i) width[i] = header[i].size();
  for (const auto& l : lines) {
    for (size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], l[i].size());
  }
  auto rule = [&] {
    std::string s = "+";
    for (size_t i = 0; i < 5; ++i) s += std::string(width[i] + 2, '-') + "+";
    return s + "\n";
  };
  auto emit = [&](std::ostringstream& out, const std::array<std::string, 5>& l) {
    out << "|";
    for (size_t i = 0; i < 5; ++i) {
      out << " " << l[i] << std::string(width[i] - l[i].size(), ' ') << " |";
    }
    out << "\n";
  };

  std::ostringstream out;
  out << rule();
  emit(out, header);
  out << rule();
  size_t li = 0;
  for (const auto& c : clusters) {
    for (size_t k = 0; k < c.rows.size(); ++k) emit(out, lines[li++]);
    if (!c.rows.empty()) out << rule();  // clusters stay visually separated
  }
  return out.str();
}

std::string render_report_csv(const std::vector<ReportCluster>& clusters) {
  std::ostringstream out;
  out << "cluster,grouped,benchmark_id,first_better,gains_removing,"
         "best_overall,exec_reduction_pct\n";
  int idx = 0;
  for (const auto& c : clusters) {
    for (const auto& r : c.rows) {
      out << idx << "," << (c.grouped ? "yes" : "no") << "," << r.benchmark_id
          << ",\"" << r.first_better << "\",\"" << r.gains_removing << "\",\""
          << r.best_overall << "\"," << format_pct(r.exec_reduction_pct)
          << "\n";
    }
    ++idx;
  }
  return out.str();
}

std::string render_report_json(const std::vector<ReportCluster>& clusters,
                               const std::string& level) {
  json doc;
  doc["level"] = level;
  doc["clusters"] = json::array();
  for (const auto& c : clusters) {
    json jc;
    jc["key_first"] = c.key_first;
    jc["key_gains"] = c.key_gains;
    jc["grouped"] = c.grouped;
    jc["rows"] = json::array();
    for (const auto& r : c.rows) {
      json jr;
      jr["benchmark_id"] = r.benchmark_id;
      if (!r.benchmark_name.empty()) jr["benchmark_name"] = r.benchmark_name;
      jr["first_better"] = r.first_better;
      jr["gains_removing"] = r.gains_removing;
      jr["best_overall"] = r.best_overall;
      jr["exec_reduction_pct"] = r.exec_reduction_pct;
      jc["rows"].push_back(std::move(jr));
    }
    doc["clusters"].push_back(std::move(jc));
  }
  return doc.dump(1) + "\n";
}

std::vector<PlotPoint> profile_plotdata(const ConfigProfile& profile,
                                        int skip_first) {
  std::vector<PlotPoint> points;
  const auto& base = profile.baseline_reference;
  if (base.exec_time_mean <= 0.0) return points;

  auto push = [&](const MeasurementRecord& rec) {
    PlotPoint p;
    p.label = rec.config_label;
    p.valid = rec.valid;
    if (rec.valid) {
      p.exec_pct = improvement_pct(rec, base, kExecTime);
      p.size_pct = base.code_size_text > 0
                       ? improvement_pct(rec, base, kCodeSize)
                       : 0.0;
    }
    points.push_back(std::move(p));
  };

  if (profile.baseline_o0.exec_time_mean > 0.0) push(profile.baseline_o0);
  for (const auto& e : profile.entries) push(e);

  if (skip_first > 0) {
    points.erase(points.begin(),
                 points.begin() +
                     std::min<size_t>(points.size(),
                                      static_cast<size_t>(skip_first)));
  }
  return points;
}

std::string render_plotdata_csv(const std::vector<PlotPoint>& points) {
  std::ostringstream out;
  out << "config,exec_time_improvement_pct,code_size_improvement_pct,valid\n";
  for (const auto& p : points) {
    out << "\"" << p.label << "\",";
    if (p.valid) {
      out << format_pct(p.exec_pct) << "," << format_pct(p.size_pct) << ",yes\n";
    } else {
      out << ",,no\n";
    }
  }
  return out.str();
}

}  // namespace optsweep
