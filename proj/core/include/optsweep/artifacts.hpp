// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_ARTIFACTS_HPP
#define OPTSWEEP_ARTIFACTS_HPP

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace optsweep {

enum class BuildStatus {
  Ok,
  FrontendFailed,
  OptimizerFailed,
  CodegenFailed,
  LinkFailed,
};

std::string to_string(BuildStatus s);

/// Per-config build outputs. status Ok implies ir/object/exe all exist as
/// non-empty files. size_path names the artifact whose .text section is
/// measured for code size (the executable for real builds; synthetic
/// adapters may point it at the object).
struct BuildArtifacts {
  std::string config_label;
  std::string ir_path;
  std::string object_path;
  std::string exe_path;
  std::string size_path;
  BuildStatus status = BuildStatus::Ok;
  std::string log;
};

/// Result of executing a benchmark artifact.
struct RunOutcome {
  int exit_code = 0;
  bool crashed = false;      // nonzero exit, signal, or spawn failure
  bool timed_out = false;
  std::string stdout_text;
  double wall_seconds = 0.0;
  std::string error;
};

/// Process-execution seam. The real implementation spawns the executable;
/// synthetic implementations fabricate deterministic outcomes so the whole
/// exploration path runs without a toolchain or target hardware.
class Runner {
 public:
  virtual ~Runner() = default;

  virtual RunOutcome run_once(const std::string& exe,
                              const std::vector<std::string>& args,
                              const std::string& workdir,
                              const std::optional<std::string>& stdin_path,
                              double timeout_seconds) = 0;

  /// Timed session: `iterations` back-to-back executions. Returns the
  /// total wall time; the last iteration's output/exit code.
  virtual RunOutcome run_repeated(const std::string& exe,
                                  const std::vector<std::string>& args,
                                  const std::string& workdir,
                                  const std::optional<std::string>& stdin_path,
                                  int iterations, double timeout_seconds);
};

/// Spawns processes and measures wall time around the whole process.
class ProcessRunner : public Runner {
 public:
  RunOutcome run_once(const std::string& exe,
                      const std::vector<std::string>& args,
                      const std::string& workdir,
                      const std::optional<std::string>& stdin_path,
                      double timeout_seconds) override;
};

/// On-disk retention of every build artifact produced during a run:
///   <root>/<target>/benchmark-<id>/<config-label>/
///     optimized.ir  object.o  exe  build.log
/// Baselines live beside the configs under O0/, O0-custom/ and <level>/.
/// Index updates are serialized; builds may record concurrently.
class ArtifactStore {
 public:
  ArtifactStore(std::string root, std::string target);

  /// Directory for one (benchmark, config label) pair; created on demand.
  std::string config_dir(const std::string& bench_id,
                         const std::string& label);

  void record(const std::string& bench_id, const BuildArtifacts& artifacts);

  /// Writes the human-readable index (one JSON document per target) with
  /// per-file checksums for the retained artifacts.
  void write_index() const;

  const std::string& root() const { return root_; }
  const std::string& target() const { return target_; }

  /// Shell-safe directory name for a config label: leading dashes dropped,
  /// whitespace runs collapsed to a single dash ("sroa - 9" -> "sroa-9").
  static std::string sanitize_label(const std::string& label);

 private:
  struct IndexEntry {
    std::string bench_id;
    BuildArtifacts artifacts;
  };
  std::string root_;
  std::string target_;
  mutable std::mutex mu_;
  std::vector<IndexEntry> entries_;
};

/// FNV-1a 64-bit checksum of a file's bytes, rendered as hex. Used by the
/// artifact index and the run store's corruption checks.
std::string file_checksum_hex(const std::string& path);
std::string bytes_checksum_hex(const std::string& bytes);

}  // namespace optsweep

#endif  // OPTSWEEP_ARTIFACTS_HPP
