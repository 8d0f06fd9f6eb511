// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_DIFF_HPP
#define OPTSWEEP_DIFF_HPP

#include <string>
#include <vector>

#include "optsweep/store.hpp"

namespace optsweep {

enum class DiffKind {
  CorrectnessRegression,  // benchmark valid in reference, invalid now
  BaselineRegression,     // reference-level exec time got worse
  BaselineImprovement,
  BestRegression,  // hidden potential shrank ("lost hidden potential")
  BestImprovement,
  MissingInCurrent,
  MissingInReference,
};

std::string to_string(DiffKind kind);

struct DiffEntry {
  std::string benchmark_id;
  DiffKind kind;
  double delta_points = 0.0;  // percentage-point change, sign = direction
  std::string detail;
};

struct RunDiff {
  std::string current_run;
  std::string reference_run;
  std::vector<DiffEntry> entries;

  bool empty() const { return entries.empty(); }
  bool has_correctness_regression() const;
};

/// Compares a run to a reference run over their common benchmarks:
/// correctness regressions, reference-baseline exec-time deltas and
/// best-config improvement deltas exceeding the threshold (percentage
/// points). Benchmarks present on only one side are listed separately.
/// Throws IncompatibleRuns when targets differ and strict_targets is set.
RunDiff diff_runs(const RunRecord& current, const RunRecord& reference,
                  double regression_threshold_pct, bool strict_targets = true);

std::string render_diff_text(const RunDiff& diff);
std::string render_diff_json(const RunDiff& diff);

}  // namespace optsweep

#endif  // OPTSWEEP_DIFF_HPP
