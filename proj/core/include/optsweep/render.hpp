// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_RENDER_HPP
#define OPTSWEEP_RENDER_HPP

#include <optional>
#include <string>
#include <vector>

#include "optsweep/report.hpp"

namespace optsweep {

/// Aligned plain-text table, one row per benchmark, grouped clusters
/// separated by rules. Percentages carry two decimals.
std::string render_report_text(const std::vector<ReportCluster>& clusters,
                               const std::string& level);

/// Delimiter-separated rendering: header row, then one record per row
/// with a stable cluster index for machine consumption.
std::string render_report_csv(const std::vector<ReportCluster>& clusters);

/// Structured rendering of the full cluster model.
std::string render_report_json(const std::vector<ReportCluster>& clusters,
                               const std::string& level);

/// One point of the per-benchmark profile series.
struct PlotPoint {
  std::string label;
  bool valid = true;
  double exec_pct = 0.0;  // improvement over the reference level, negative = better
  double size_pct = 0.0;
};

/// Series in axis order: the -O0 baseline, then every entry (the empty
/// "-O0-custom" config first). skip_first drops the leading points, which
/// unclutters plots when the unoptimized configurations dwarf the rest.
std::vector<PlotPoint> profile_plotdata(const ConfigProfile& profile,
                                        int skip_first = 0);

std::string render_plotdata_csv(const std::vector<PlotPoint>& points);

/// "-70.98" style fixed two-decimal percentage.
std::string format_pct(double pct);

}  // namespace optsweep

#endif  // OPTSWEEP_RENDER_HPP
