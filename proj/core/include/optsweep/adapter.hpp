// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_ADAPTER_HPP
#define OPTSWEEP_ADAPTER_HPP

#include <string>
#include <vector>

#include "optsweep/artifacts.hpp"
#include "optsweep/benchmark_spec.hpp"
#include "optsweep/errors.hpp"

namespace optsweep {

/// Object + executable produced by the back-end/link stage.
struct LinkedArtifacts {
  std::string object_path;
  std::string exe_path;
  std::string size_path;  // artifact to read .text from
};

/// Stage tag carried by BuildFailure diagnostics.
enum class BuildStage { Frontend, Optimizer, Codegen, Link };

class StageFailure : public BuildFailure {
 public:
  StageFailure(BuildStage stage, const std::string& message)
      : BuildFailure(message), stage_(stage) {}
  BuildStage stage() const { return stage_; }

 private:
  BuildStage stage_;
};

/// Behavioral contract every toolchain binding implements. The harness
/// core never invokes compiler binaries directly; everything
/// toolchain-specific (command lines, pass-manager dialects, sysroots)
/// lives behind this interface. Implementations must be reentrant for
/// concurrent calls with distinct inputs.
///
/// Contracts:
///  - optimize() with an empty flag list returns IR semantically
///    equivalent to its input.
///  - all operations are deterministic given identical inputs and
///    environment.
class CompilerAdapter {
 public:
  virtual ~CompilerAdapter() = default;

  virtual std::string description() const = 0;
  virtual std::string compiler_version() const = 0;

  /// Front-end only. Called once per benchmark per run; the returned IR
  /// file is reused for every configuration.
  virtual std::string emit_unoptimized_ir(const BenchmarkSpec& bench,
                                          const std::string& out_dir) = 0;

  /// Runs the common optimizer with exactly `flags`, in order.
  virtual std::string optimize(const std::string& ir_path,
                               const std::vector<std::string>& flags,
                               const std::string& out_dir) = 0;

  /// Back-end + linker, always at the exploration level.
  virtual LinkedArtifacts codegen_and_link(const std::string& ir_path,
                                           const BenchmarkSpec& bench,
                                           const std::string& level,
                                           const std::string& out_dir) = 0;

  /// Monolithic one-shot build (used for the -O0 and -O3 baselines).
  virtual LinkedArtifacts reference_build(const BenchmarkSpec& bench,
                                          const std::string& level,
                                          const std::string& out_dir) = 0;

  /// The compiler's own pass listing for `level`, in the pipeline fixture
  /// text format (one identifier per line).
  virtual std::string introspect_pipeline(const std::string& level,
                                          const std::string& target) = 0;

  /// Runner able to execute artifacts this adapter produces.
  virtual Runner& runner() = 0;
};

}  // namespace optsweep

#endif  // OPTSWEEP_ADAPTER_HPP
