// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_STORE_HPP
#define OPTSWEEP_STORE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optsweep/profile.hpp"

namespace optsweep {

/// Everything needed to reproduce or re-render one exploration run.
struct RunRecord {
  std::string run_id;  // assigned at save time when empty
  std::string target;
  std::string compiler_version;
  std::string level = "-O3";
  std::string created_utc;
  StabilityPolicy policy;
  std::vector<std::string> objective{kExecTime, kCodeSize};
  double tie_epsilon = 0.005;
  std::map<std::string, std::string> environment;  // clock source, governor...
  std::vector<ConfigProfile> profiles;
  // benchmarks whose baselines failed; exploration skipped them
  std::map<std::string, std::string> aborted;
};

struct RunIndexRow {
  std::string run_id;
  std::string target;
  std::string created_utc;
  bool clean = false;  // no correctness failures anywhere in the run
};

/// True when no record in any profile of the run is invalid.
bool run_is_clean(const RunRecord& run);

/// Directory-tree store: structured text documents plus one index file
/// with per-file checksums.
///
///   <root>/index.json
///   <root>/runs/<run_id>/run.json
///   <root>/runs/<run_id>/profiles/benchmark-<id>.json
///
/// Single writer, many readers. A run becomes visible only when the index
/// is atomically replaced, so an interrupted save never leaves a partial
/// run in the index.
class RunStore {
 public:
  explicit RunStore(std::string root);

  /// Persists the run and returns its id. Throws DuplicateRunId when the
  /// id is already indexed and StorageFull/Error on write failures.
  std::string save_run(const RunRecord& run);

  /// Reconstructs a run including all profiles. Throws NotFound for
  /// unknown ids and CorruptRecord on checksum mismatches.
  RunRecord load_run(const std::string& run_id) const;

  /// Newest run for the target with zero correctness failures.
  std::optional<std::string> latest_reference(const std::string& target) const;

  std::vector<RunIndexRow> list_runs() const;

  const std::string& root() const { return root_; }

  static std::string make_run_id(const std::string& target);

 private:
  std::string root_;
};

/// Store-schema (de)serialization for profile documents; shared with the
/// fixture replay path.
std::string profile_to_json_text(const ConfigProfile& profile);
ConfigProfile profile_from_json_text(const std::string& text);

/// Loads every profile document in a directory (the replay input). Throws
/// SchemaMismatch when the directory holds no valid profile documents or
/// when documents disagree on the target.
std::vector<ConfigProfile> load_profile_fixtures(const std::string& dir);

}  // namespace optsweep

#endif  // OPTSWEEP_STORE_HPP
