// SPDX-License-Identifier: Apache-2.0

#include "optsweep/report.hpp"

#include <algorithm>
#include <map>

#include "optsweep/errors.hpp"

namespace optsweep {

namespace {

bool beats(const MeasurementRecord& e, const MeasurementRecord& base,
           double epsilon) {
  return e.valid && e.exec_time_mean < base.exec_time_mean * (1.0 - epsilon);
}

int prefix_of_label(const ConfigProfile& profile, const std::string& label) {
  if (label == kNoPattern) return -1;
  for (const auto& e : profile.entries) {
    if (e.config_label == label) return e.prefix_len;
  }
  // recorded classifications may reference configs outside the entry list;
  // fall back to the "<name> - <len>" suffix
  auto pos = label.rfind(" - ");
  if (pos != std::string::npos) {
    try {
      return std::stoi(label.substr(pos + 3));
    } catch (...) {
    }
  }
  return label == "-O0-custom" ? 0 : -1;
}

// numeric-aware id comparison so benchmark "9" sorts before "10"
bool id_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size() &&
      a.find_first_not_of("0123456789") == std::string::npos &&
      b.find_first_not_of("0123456789") == std::string::npos) {
    return a.size() < b.size();
  }
  return a < b;
}

bool row_gain_less(const ReportRow& a, const ReportRow& b) {
  if (a.exec_reduction_pct != b.exec_reduction_pct) {
    return a.exec_reduction_pct < b.exec_reduction_pct;  // larger gain first
  }
  return id_less(a.benchmark_id, b.benchmark_id);
}

}  // namespace

std::string first_better_config(const ConfigProfile& profile, double epsilon,
                                int sustain) {
  const auto& entries = profile.entries;
  const auto& base = profile.baseline_reference;
  if (sustain < 1) sustain = 1;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (!beats(entries[i], base, epsilon)) continue;
    if (i + static_cast<size_t>(sustain) > entries.size()) break;
    bool sustained = true;
    for (size_t j = i; j < i + static_cast<size_t>(sustain); ++j) {
      if (!beats(entries[j], base, epsilon)) {
        sustained = false;
        break;
      }
    }
    if (sustained) return entries[i].config_label;
  }
  return kNoPattern;
}

std::string gains_removing_config(const ConfigProfile& profile,
                                  const std::string& first_better_label,
                                  double epsilon) {
  if (first_better_label == kNoPattern) return kNoPattern;
  const auto& entries = profile.entries;
  const auto& base = profile.baseline_reference;
  size_t start = entries.size();
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].config_label == first_better_label) {
      start = i + 1;
      break;
    }
  }
  for (size_t i = start; i < entries.size(); ++i) {
    if (!entries[i].valid) continue;
    if (!beats(entries[i], base, epsilon)) return entries[i].config_label;
  }
  return kNoPattern;
}

ReportRow classify_profile(const ConfigProfile& profile,
                           const ReportParams& params) {
  ReportRow row;
  row.benchmark_id = profile.benchmark_id;
  row.benchmark_name = profile.benchmark_name;
  if (profile.classification) {
    const auto& c = *profile.classification;
    row.first_better = c.first_better;
    row.gains_removing = c.gains_removing;
    row.best_overall = c.best_overall;
    row.exec_reduction_pct = c.exec_reduction_pct;
  } else {
    row.first_better = first_better_config(profile, params.epsilon, params.sustain);
    row.gains_removing =
        gains_removing_config(profile, row.first_better, params.epsilon);
    Selection best = select_best(profile, params.criteria);
    row.best_overall = best.config_label;
    row.exec_reduction_pct = best.improvement_pct.count(kExecTime)
                                 ? best.improvement_pct.at(kExecTime)
                                 : 0.0;
  }
  row.first_better_prefix = prefix_of_label(profile, row.first_better);
  row.gains_removing_prefix = prefix_of_label(profile, row.gains_removing);
  return row;
}

std::vector<ReportCluster> build_regression_report(
    const std::vector<ConfigProfile>& profiles, const ReportParams& params) {
  std::vector<ReportRow> rows;
  for (const auto& p : profiles) {
    ReportRow row = classify_profile(p, params);
    if (row.exec_reduction_pct < -params.threshold_pct) rows.push_back(row);
  }

  // first-level grouping on the exact (first_better, gains_removing) pair;
  // rows without a first-better pattern never group
  std::map<std::pair<std::string, std::string>, std::vector<ReportRow>> by_key;
  for (const auto& r : rows) {
    by_key[{r.first_better, r.gains_removing}].push_back(r);
  }

  std::vector<ReportCluster> grouped;
  std::vector<ReportRow> ungrouped;
  for (auto& [key, members] : by_key) {
    if (members.size() >= 2 && key.first != kNoPattern) {
      ReportCluster c;
      c.key_first = key.first;
      c.key_gains = key.second;
      c.grouped = true;
      c.rows = std::move(members);
      grouped.push_back(std::move(c));
    } else {
      for (auto& r : members) ungrouped.push_back(std::move(r));
    }
  }

  // second-level grouping: rows sharing best_overall stay contiguous.
  // Multi-row subgroups lead (ordered by their best reduction), remaining
  // rows follow in reduction order.
  for (auto& cluster : grouped) {
    std::map<std::string, std::vector<ReportRow>> by_best;
    for (auto& r : cluster.rows) by_best[r.best_overall].push_back(r);

    struct Subgroup {
      double best_reduction;
      std::vector<ReportRow> rows;
    };
    std::vector<Subgroup> multi;
    std::vector<ReportRow> singles;
    for (auto& [best, members] : by_best) {
      std::sort(members.begin(), members.end(), row_gain_less);
      if (members.size() >= 2) {
        multi.push_back({members.front().exec_reduction_pct, std::move(members)});
      } else {
        singles.push_back(std::move(members.front()));
      }
    }
    std::sort(multi.begin(), multi.end(), [](const Subgroup& a, const Subgroup& b) {
      if (a.best_reduction != b.best_reduction) {
        return a.best_reduction < b.best_reduction;
      }
      return a.rows.front().best_overall < b.rows.front().best_overall;
    });
    std::sort(singles.begin(), singles.end(), row_gain_less);

    cluster.rows.clear();
    for (auto& sg : multi) {
      for (auto& r : sg.rows) cluster.rows.push_back(std::move(r));
    }
    for (auto& r : singles) cluster.rows.push_back(std::move(r));
  }

  auto cluster_gain = [](const ReportCluster& c) {
    double m = c.rows.front().exec_reduction_pct;
    for (const auto& r : c.rows) m = std::min(m, r.exec_reduction_pct);
    return m;
  };
  std::sort(grouped.begin(), grouped.end(),
            [&](const ReportCluster& a, const ReportCluster& b) {
              const double ga = cluster_gain(a);
              const double gb = cluster_gain(b);
              if (ga != gb) return ga < gb;
              if (a.key_first != b.key_first) return a.key_first < b.key_first;
              return a.key_gains < b.key_gains;
            });
  std::sort(ungrouped.begin(), ungrouped.end(), row_gain_less);

  std::vector<ReportCluster> out = std::move(grouped);
  for (auto& r : ungrouped) {
    ReportCluster c;
    c.key_first = r.first_better;
    c.key_gains = r.gains_removing;
    c.grouped = false;
    c.rows.push_back(std::move(r));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace optsweep
