// SPDX-License-Identifier: Apache-2.0

#include "optsweep/profile.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "optsweep/errors.hpp"

namespace optsweep {

double resource_value(const MeasurementRecord& record,
                      const std::string& resource) {
  if (resource == kExecTime) return record.exec_time_mean;
  if (resource == kCodeSize) return static_cast<double>(record.code_size_text);
  auto it = record.metrics.find(resource);
  if (it != record.metrics.end()) return it->second;
  throw Error("unknown resource key: " + resource);
}

double improvement_pct(const MeasurementRecord& record,
                       const MeasurementRecord& baseline,
                       const std::string& resource) {
  const double base = resource_value(baseline, resource);
  if (base <= 0.0) {
    throw ZeroBaseline("baseline " + resource + " is not positive");
  }
  return 100.0 * (resource_value(record, resource) - base) / base;
}

namespace {

struct Candidate {
  const MeasurementRecord* record;
  int prefix_order;  // INT_MAX for the baseline so real configs win ties
};

}  // namespace

Selection select_best(const ConfigProfile& profile,
                      const SelectionCriteria& criteria) {
  if (criteria.objective.empty()) {
    throw Error("selection criteria need at least one objective key");
  }
  const MeasurementRecord& baseline = profile.baseline_reference;
  const std::string& primary = criteria.objective.front();
  const double base_primary = resource_value(baseline, primary);

  std::vector<Candidate> pool;
  for (const auto& e : profile.entries) {
    if (!e.valid) continue;
    if (resource_value(e, primary) > base_primary) continue;
    pool.push_back({&e, e.prefix_len});
  }

  Selection sel;
  if (pool.empty()) {
    // nothing beats or matches the baseline, or nothing was valid
    sel.baseline_selected = true;
    sel.config_label = profile.level;
    sel.fallback_warning = std::none_of(
        profile.entries.begin(), profile.entries.end(),
        [](const MeasurementRecord& e) { return e.valid; });
    for (const auto& key : criteria.objective) sel.improvement_pct[key] = 0.0;
    return sel;
  }
  pool.push_back({&baseline, INT_MAX});

  auto score = [&](const Candidate& c) {
    return criteria.custom_score ? criteria.custom_score(*c.record)
                                 : resource_value(*c.record, primary);
  };

  double best_primary = score(pool.front());
  for (const auto& c : pool) best_primary = std::min(best_primary, score(c));

  // candidates within the relative tie window of the best primary value
  const double window =
      best_primary + std::abs(best_primary) * criteria.tie_epsilon;
  std::vector<Candidate> tied;
  for (const auto& c : pool) {
    if (score(c) <= window) tied.push_back(c);
  }

  auto better = [&](const Candidate& a, const Candidate& b) {
    for (size_t k = 1; k < criteria.objective.size(); ++k) {
      const double va = resource_value(*a.record, criteria.objective[k]);
      const double vb = resource_value(*b.record, criteria.objective[k]);
      if (va != vb) return va < vb;
    }
    if (a.prefix_order != b.prefix_order) return a.prefix_order < b.prefix_order;
    return a.record->config_label < b.record->config_label;
  };
  const Candidate* winner = &tied.front();
  for (const auto& c : tied) {
    if (better(c, *winner)) winner = &c;
  }

  sel.baseline_selected = winner->record == &baseline;
  sel.config_label =
      sel.baseline_selected ? profile.level : winner->record->config_label;
  for (const auto& key : criteria.objective) {
    sel.improvement_pct[key] =
        sel.baseline_selected ? 0.0 : improvement_pct(*winner->record, baseline, key);
  }
  return sel;
}

}  // namespace optsweep
