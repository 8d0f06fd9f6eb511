// SPDX-License-Identifier: Apache-2.0
//
// Classification of per-benchmark profiles into the enhanced regression
// report: for every benchmark, the first configuration that sustainably
// outperforms the exploration-level baseline, the configuration at which
// that gain is lost again, and the best configuration overall. Rows are
// clustered on shared (first-better, gains-removing) pairs so recurring
// optimizer behaviors stand out across benchmarks.

#ifndef OPTSWEEP_REPORT_HPP
#define OPTSWEEP_REPORT_HPP

#include <string>
#include <vector>

#include "optsweep/profile.hpp"

namespace optsweep {

/// One classified benchmark line.
struct ReportRow {
  std::string benchmark_id;
  std::string benchmark_name;
  std::string first_better = kNoPattern;
  std::string gains_removing = kNoPattern;
  std::string best_overall;
  double exec_reduction_pct = 0.0;
  // prefix lengths backing the labels; -1 when the column is "no pattern"
  int first_better_prefix = -1;
  int gains_removing_prefix = -1;
};

/// Rows sharing a (first_better, gains_removing) key. Ungrouped rows are
/// carried as single-row clusters with grouped == false, appended after
/// the grouped clusters in gain order.
struct ReportCluster {
  std::string key_first;
  std::string key_gains;
  bool grouped = false;
  std::vector<ReportRow> rows;
};

struct ReportParams {
  double threshold_pct = 3.0;  // include rows reducing exec time by more
  double epsilon = 0.01;       // relative margin for "outperforms"
  int sustain = 2;             // consecutive beating configs required
  SelectionCriteria criteria;  // best-overall selection
};

/// Label of the lowest-prefix valid config that beats the reference
/// baseline's exec time by more than `epsilon` (relative) and begins a run
/// of at least `sustain` consecutive valid configs all beating it; an
/// invalid or non-beating entry breaks a run. kNoPattern when none exists.
std::string first_better_config(const ConfigProfile& profile, double epsilon,
                                int sustain);

/// Label of the first valid config after first_better whose exec time no
/// longer beats the baseline by more than `epsilon`; invalid entries are
/// skipped. kNoPattern when the gain persists through the final config.
std::string gains_removing_config(const ConfigProfile& profile,
                                  const std::string& first_better_label,
                                  double epsilon);

/// All three columns for one profile. Uses the profile's precomputed
/// classification when it carries one.
ReportRow classify_profile(const ConfigProfile& profile,
                           const ReportParams& params);

/// Threshold-filtered, two-level-grouped report:
///  - rows whose best-overall exec reduction does not exceed the threshold
///    are dropped;
///  - rows sharing a (first_better, gains_removing) key (with a real
///    first-better label) form clusters, ordered by their best reduction;
///  - inside a cluster, rows sharing best_overall stay contiguous:
///    multi-row subgroups first (by best reduction), then remaining rows
///    by reduction;
///  - rows with unique keys or no first-better pattern follow the
///    clusters, sorted by reduction.
/// The result is independent of the input profile order.
std::vector<ReportCluster> build_regression_report(
    const std::vector<ConfigProfile>& profiles, const ReportParams& params);

}  // namespace optsweep

#endif  // OPTSWEEP_REPORT_HPP
