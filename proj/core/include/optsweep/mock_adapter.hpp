// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_MOCK_ADAPTER_HPP
#define OPTSWEEP_MOCK_ADAPTER_HPP

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "optsweep/adapter.hpp"

namespace optsweep {

/// Synthetic cost assigned to one flag-list prefix.
struct CostPoint {
  double time_s = 0.0;
  std::uint64_t size_bytes = 0;
  std::string fail_stage;      // "", "optimizer", "codegen", "link"
  bool invalid_output = false; // artifact prints corrupted output
  int exit_code = 0;           // nonzero -> artifact crashes
};

struct BenchmarkCost {
  std::string output = "ok\n";
  CostPoint o0;                        // monolithic -O0 build
  std::optional<CostPoint> reference;  // monolithic build at the level;
                                       // defaults to the largest prefix
  std::map<int, CostPoint> prefixes;   // prefix_len -> cost
};

/// Deterministic cost model backing the mock toolchain, keyed by benchmark
/// id and flag-list prefix length.
struct CostModel {
  std::string target = "mock";
  std::string compiler_version = "mock-toolchain";
  std::map<std::string, BenchmarkCost> benchmarks;

  static CostModel from_file(const std::string& path);
  static CostModel from_json_text(const std::string& text);

  const BenchmarkCost& bench(const std::string& id) const;
  /// Cost for a prefix; throws UnknownPrefix when the model has no entry.
  const CostPoint& prefix_cost(const std::string& id, int prefix_len) const;
};

/// Toolchain stand-in producing self-describing artifacts: the "IR" files
/// are annotated text stubs, the object is a minimal ELF whose .text
/// section has exactly the modeled size, and the executable is a shell
/// script that prints the modeled output (and carries the synthetic cost
/// in its header comments). Paired with SyntheticRunner the full
/// exploration, measurement and report path runs with no compiler
/// installed and no timing noise.
class MockAdapter : public CompilerAdapter {
 public:
  explicit MockAdapter(CostModel model, std::string pipeline_text = {});
  ~MockAdapter() override;

  std::string description() const override { return "mock"; }
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

  // call-log accessors for harness invariants
  int emit_ir_calls(const std::string& bench_id) const;
  std::vector<std::string> codegen_levels() const;

 private:
  LinkedArtifacts write_linked(const std::string& bench_id,
                               const CostPoint& cost,
                               const std::string& output,
                               const std::string& out_dir);

  CostModel model_;
  std::string pipeline_text_;
  std::unique_ptr<Runner> runner_;
  mutable std::mutex mu_;
  std::map<std::string, int> emit_calls_;
  std::vector<std::string> codegen_levels_;
};

/// Reads the synthetic cost header of a mock executable script and
/// fabricates the outcome: wall time = modeled time x iterations, stdout
/// and exit code exactly as modeled.
class SyntheticRunner : public Runner {
 public:
  RunOutcome run_once(const std::string& exe,
                      const std::vector<std::string>& args,
                      const std::string& workdir,
                      const std::optional<std::string>& stdin_path,
                      double timeout_seconds) override;
  RunOutcome run_repeated(const std::string& exe,
                          const std::vector<std::string>& args,
                          const std::string& workdir,
                          const std::optional<std::string>& stdin_path,
                          int iterations, double timeout_seconds) override;
};

}  // namespace optsweep

#endif  // OPTSWEEP_MOCK_ADAPTER_HPP
