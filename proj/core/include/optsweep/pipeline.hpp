// SPDX-License-Identifier: Apache-2.0
//
// Model of a standard optimization level's pass sequence and the
// order-preserving prefix configurations derived from it.
//
// A pipeline is the ordered list of pass invocations a compiler runs for a
// level such as -O3. Slicing it immediately after each documented
// transformation pass yields the configuration set explored by the harness:
// the empty "-O0-custom" point plus one configuration per transformation
// invocation, each keeping every intervening analysis pass so implicit
// dependencies stay intact.

#ifndef OPTSWEEP_PIPELINE_HPP
#define OPTSWEEP_PIPELINE_HPP

#include <set>
#include <string>
#include <vector>

namespace optsweep {

enum class PassKind { Transformation, Analysis };

struct PassInvocation {
  std::string name;
  PassKind kind = PassKind::Analysis;
  int occurrence = 1;  // 1-based count of this name so far in the pipeline
  int position = 1;    // 1-based index in the full pipeline
};

enum class PipelineSource { Introspected, Fixture };

struct PassPipeline {
  std::string level_label;  // e.g. "-O3"
  std::vector<PassInvocation> invocations;
  PipelineSource source = PipelineSource::Fixture;

  int transformation_count() const;
};

/// One prefix configuration: the first `prefix_len` invocations of the
/// source pipeline, order preserved. prefix_len 0 is the "-O0-custom"
/// configuration (split compilation, empty optimizer flag list).
struct OptConfig {
  std::string id;
  int prefix_len = 0;
  std::string last_transform_name;  // empty when prefix_len == 0
  std::vector<std::string> flags;
};

struct ParseDiagnostics {
  // distinct pass names that are neither whitelisted transformations nor
  // known analyses; kept inline as analyses so dependencies are preserved
  std::vector<std::string> unknown_passes;
};

/// Parses an introspection dump or fixture file: one pass identifier per
/// line, '#' starts a comment. Kind is assigned by whitelist membership;
/// occurrence counters are computed in input order.
///
/// Throws EmptyInput when no identifiers are found and MalformedLine (with
/// the 1-based line number) for tokens that are not valid pass identifiers.
PassPipeline parse_pipeline(const std::string& raw_text,
                            const std::set<std::string>& whitelist,
                            const std::string& level_label,
                            const std::set<std::string>& known_analyses = {},
                            ParseDiagnostics* diags = nullptr);

/// All prefix configurations in ascending prefix_len order: the empty
/// config followed by one config per Transformation invocation, truncated
/// immediately after it. A pipeline with no transformations yields just
/// the empty config.
std::vector<OptConfig> generate_configs(const PassPipeline& pipeline);

/// "<last transformation name> - <prefix_len>", or "-O0-custom" for the
/// empty config. Unique within one pipeline's config list.
std::string config_label(const OptConfig& config);

/// Reads a one-name-per-line list file ('#' comments allowed).
std::set<std::string> load_pass_name_list(const std::string& path);

}  // namespace optsweep

#endif  // OPTSWEEP_PIPELINE_HPP
