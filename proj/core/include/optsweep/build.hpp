// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_BUILD_HPP
#define OPTSWEEP_BUILD_HPP

#include <string>

#include "optsweep/adapter.hpp"
#include "optsweep/artifacts.hpp"
#include "optsweep/benchmark_spec.hpp"
#include "optsweep/pipeline.hpp"

namespace optsweep {

struct BaselineArtifacts {
  BuildArtifacts o0;         // monolithic -O0 build
  BuildArtifacts o0_custom;  // split build, empty optimizer flag list
  BuildArtifacts reference;  // monolithic build at the exploration level
  std::string unoptimized_ir;  // front-end output, cached for the sweep
};

/// Builds the three baselines and retains them in the store under
/// O0/, O0-custom/ and <level>/. The front-end runs exactly once here;
/// the cached IR it returns feeds every subsequent build_config call.
/// Throws BuildFailure when any baseline fails; a baseline failure aborts
/// exploration of this benchmark.
BaselineArtifacts build_baselines(const BenchmarkSpec& bench,
                                  CompilerAdapter& adapter,
                                  const std::string& level,
                                  ArtifactStore& store);

/// Split build of one configuration from the cached unoptimized IR:
/// optimize with the config's flags, then back-end + link at `level`.
/// Failures are recorded in the returned status, never thrown, so a bad
/// config cannot void the rest of the sweep.
BuildArtifacts build_config(const BenchmarkSpec& bench, const OptConfig& config,
                            const std::string& cached_ir,
                            CompilerAdapter& adapter, const std::string& level,
                            ArtifactStore& store);

}  // namespace optsweep

#endif  // OPTSWEEP_BUILD_HPP
