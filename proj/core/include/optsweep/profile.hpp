// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_PROFILE_HPP
#define OPTSWEEP_PROFILE_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optsweep/measure.hpp"

namespace optsweep {

inline constexpr const char* kNoPattern = "no pattern";

/// Classification cells precomputed outside the harness (recorded
/// reference results). When present, report building consumes these
/// directly instead of running the classifier over the entries.
struct PrecomputedClassification {
  std::string first_better;
  std::string gains_removing;
  std::string best_overall;
  double exec_reduction_pct = 0.0;
};

/// Full per-benchmark series: one record per prefix configuration in
/// ascending prefix_len order, plus the three baselines. The reference
/// baseline must be valid for the profile to be usable.
struct ConfigProfile {
  std::string benchmark_id;
  std::string benchmark_name;
  std::string target;
  std::string level = "-O3";
  std::string compiler_version;
  std::vector<MeasurementRecord> entries;
  MeasurementRecord baseline_o0;
  MeasurementRecord baseline_o0_custom;
  MeasurementRecord baseline_reference;  // the exploration level, e.g. -O3
  std::optional<PrecomputedClassification> classification;
};

/// Resource keys understood by selection and reporting.
inline constexpr const char* kExecTime = "exec_time";
inline constexpr const char* kCodeSize = "code_size";

struct SelectionCriteria {
  // ordered objective: first key decides, later keys break ties
  std::vector<std::string> objective{kExecTime, kCodeSize};
  // two primary values within this relative window count as "the same"
  double tie_epsilon = 0.005;
  // optional scoring function; lower is better, standard tie-break applies
  std::function<double(const MeasurementRecord&)> custom_score;
};

struct Selection {
  std::string config_label;
  bool baseline_selected = false;
  bool fallback_warning = false;  // no valid entries; fell back to baseline
  std::map<std::string, double> improvement_pct;  // per objective key
};

/// 100 * (value(record) - value(baseline)) / value(baseline); negative
/// means the record improves on the baseline. Throws ZeroBaseline.
double improvement_pct(const MeasurementRecord& record,
                       const MeasurementRecord& baseline,
                       const std::string& resource);

double resource_value(const MeasurementRecord& record,
                      const std::string& resource);

/// Best configuration of a profile under the criteria.
///
/// Candidates are the valid entries that do not lose to the reference
/// baseline on the primary objective, plus the baseline itself; the
/// winner is the lexicographic argmin (primary objective; ties within
/// tie_epsilon broken by the remaining keys, then by smaller prefix_len).
/// The result is independent of entry insertion order, an invalid record
/// can never win, and the reported primary improvement is never positive.
Selection select_best(const ConfigProfile& profile,
                      const SelectionCriteria& criteria);

}  // namespace optsweep

#endif  // OPTSWEEP_PROFILE_HPP
