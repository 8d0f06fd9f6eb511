// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_CLANG_ADAPTER_HPP
#define OPTSWEEP_CLANG_ADAPTER_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "optsweep/adapter.hpp"

namespace optsweep {

/// Paths of the LLVM tools the adapter drives.
struct LlvmToolchain {
  std::string clang;
  std::string opt;
  int major_version = 0;
};

/// CompilerAdapter backed by a real clang/opt installation. The split flow
/// is: clang -O0 front-end once (optnone suppressed so later passes can
/// fire), opt with the config's flag list, clang back-end + link at the
/// exploration level. Pass-manager dialect differences are handled here:
/// legacy opt takes every flag verbatim; new-PM opt (LLVM 13+) receives
/// only the whitelisted transformation names, since its analyses run on
/// demand.
class ClangAdapter : public CompilerAdapter {
 public:
  ClangAdapter(LlvmToolchain tools,
               std::set<std::string> transform_whitelist,
               std::vector<std::string> backend_passthrough = {});
  ~ClangAdapter() override;

  /// Finds clang and opt on PATH (plain or version-suffixed names);
  /// nullopt when either tool is missing.
  static std::optional<LlvmToolchain> detect();

  /// Human-readable account of which tools were (not) found.
  static std::string detect_report();

  std::string description() const override { return "clang"; }
  std::string compiler_version() const override;

  std::string emit_unoptimized_ir(const BenchmarkSpec& bench,
                                  const std::string& out_dir) override;
  std::string optimize(const std::string& ir_path,
                       const std::vector<std::string>& flags,
                       const std::string& out_dir) override;
  LinkedArtifacts codegen_and_link(const std::string& ir_path,
                                   const BenchmarkSpec& bench,
                                   const std::string& level,
                                   const std::string& out_dir) override;
  LinkedArtifacts reference_build(const BenchmarkSpec& bench,
                                  const std::string& level,
                                  const std::string& out_dir) override;
  std::string introspect_pipeline(const std::string& level,
                                  const std::string& target) override;
  Runner& runner() override;

 private:
  struct ToolResult {
    int exit_code;
    std::string output;  // stdout + stderr
  };
  ToolResult run_tool(const std::vector<std::string>& argv) const;
  bool new_pass_manager() const { return tools_.major_version >= 13; }

  LlvmToolchain tools_;
  std::set<std::string> whitelist_;
  std::vector<std::string> backend_passthrough_;
  std::unique_ptr<Runner> runner_;
  mutable std::string version_;
};

/// Flattens new-PM `-print-pipeline-passes` output (nested, parameterized,
/// comma-separated) into one pass name per line.
std::string flatten_new_pm_pipeline(const std::string& line);

}  // namespace optsweep

#endif  // OPTSWEEP_CLANG_ADAPTER_HPP
