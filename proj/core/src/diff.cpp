// SPDX-License-Identifier: Apache-2.0

#include "optsweep/diff.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "optsweep/errors.hpp"
#include "optsweep/render.hpp"

using nlohmann::json;

namespace optsweep {

std::string to_string(DiffKind kind) {
  switch (kind) {
    case DiffKind::CorrectnessRegression: return "correctness-regression";
    case DiffKind::BaselineRegression: return "baseline-regression";
    case DiffKind::BaselineImprovement: return "baseline-improvement";
    case DiffKind::BestRegression: return "best-regression";
    case DiffKind::BestImprovement: return "best-improvement";
    case DiffKind::MissingInCurrent: return "missing-in-current";
    case DiffKind::MissingInReference: return "missing-in-reference";
  }
  return "unknown";
}

bool RunDiff::has_correctness_regression() const {
  return std::any_of(entries.begin(), entries.end(), [](const DiffEntry& e) {
    return e.kind == DiffKind::CorrectnessRegression;
  });
}

namespace {

bool profile_valid(const ConfigProfile& p) {
  for (const auto& e : p.entries) {
    if (!e.valid) return false;
  }
  return p.baseline_o0.valid && p.baseline_o0_custom.valid &&
         p.baseline_reference.valid;
}

/// Best exec improvement of a profile: recorded classification when
/// present, otherwise recomputed from the entries.
double best_improvement(const ConfigProfile& p) {
  if (p.classification) return p.classification->exec_reduction_pct;
  SelectionCriteria criteria;
  Selection s = select_best(p, criteria);
  auto it = s.improvement_pct.find(kExecTime);
  return it == s.improvement_pct.end() ? 0.0 : it->second;
}

}  // namespace

RunDiff diff_runs(const RunRecord& current, const RunRecord& reference,
                  double regression_threshold_pct, bool strict_targets) {
  if (strict_targets && current.target != reference.target) {
    throw IncompatibleRuns("target mismatch: '" + current.target + "' vs '" +
                           reference.target + "'");
  }
  RunDiff diff;
  diff.current_run = current.run_id;
  diff.reference_run = reference.run_id;

  std::map<std::string, const ConfigProfile*> cur, ref;
  for (const auto& p : current.profiles) cur[p.benchmark_id] = &p;
  for (const auto& p : reference.profiles) ref[p.benchmark_id] = &p;

  for (const auto& [id, rp] : ref) {
    auto it = cur.find(id);
    if (it == cur.end()) {
      diff.entries.push_back(
          {id, DiffKind::MissingInCurrent, 0.0, "benchmark absent from current run"});
      continue;
    }
    const ConfigProfile* cp = it->second;

    if (profile_valid(*rp) && !profile_valid(*cp)) {
      std::string why = "output validation failed";
      for (const auto& e : cp->entries) {
        if (!e.valid) {
          why = e.config_label +
                (e.failure_reason ? ": " + *e.failure_reason : "");
          break;
        }
      }
      diff.entries.push_back({id, DiffKind::CorrectnessRegression, 0.0, why});
    }

    // reference-level baseline drift
    const double rb = rp->baseline_reference.exec_time_mean;
    const double cb = cp->baseline_reference.exec_time_mean;
    if (rb > 0.0 && cb > 0.0) {
      const double delta = 100.0 * (cb - rb) / rb;
      if (std::abs(delta) > regression_threshold_pct) {
        diff.entries.push_back(
            {id,
             delta > 0 ? DiffKind::BaselineRegression
                       : DiffKind::BaselineImprovement,
             delta,
             current.level + " baseline exec time moved by " +
                 format_pct(delta) + "%"});
      }
    }

    // hidden-potential drift: change of the best config's improvement
    const double rbest = best_improvement(*rp);
    const double cbest = best_improvement(*cp);
    const double delta = cbest - rbest;
    if (std::abs(delta) > regression_threshold_pct) {
      if (delta > 0) {
        diff.entries.push_back(
            {id, DiffKind::BestRegression, delta,
             "lost hidden potential: best improvement " + format_pct(rbest) +
                 "% -> " + format_pct(cbest) + "%"});
      } else {
        diff.entries.push_back(
            {id, DiffKind::BestImprovement, delta,
             "best improvement " + format_pct(rbest) + "% -> " +
                 format_pct(cbest) + "%"});
      }
    }
  }
  for (const auto& [id, cp] : cur) {
    (void)cp;
    if (!ref.count(id)) {
      diff.entries.push_back({id, DiffKind::MissingInReference, 0.0,
                              "benchmark absent from reference run"});
    }
  }
  return diff;
}

std::string render_diff_text(const RunDiff& diff) {
  std::ostringstream out;
  out << "diff " << diff.current_run << " vs reference " << diff.reference_run
      << "\n";
  if (diff.empty()) {
    out << "no differences above threshold\n";
    return out.str();
  }
  for (const auto& e : diff.entries) {
    out << "  [" << to_string(e.kind) << "] benchmark " << e.benchmark_id
        << ": " << e.detail << "\n";
  }
  return out.str();
}

std::string render_diff_json(const RunDiff& diff) {
  json doc;
  doc["current_run"] = diff.current_run;
  doc["reference_run"] = diff.reference_run;
  doc["entries"] = json::array();
  for (const auto& e : diff.entries) {
    doc["entries"].push_back({{"benchmark_id", e.benchmark_id},
                              {"kind", to_string(e.kind)},
                              {"delta_points", e.delta_points},
                              {"detail", e.detail}});
  }
  return doc.dump(1) + "\n";
}

}  // namespace optsweep
