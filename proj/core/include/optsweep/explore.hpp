// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_EXPLORE_HPP
#define OPTSWEEP_EXPLORE_HPP

#include <string>
#include <vector>

#include "optsweep/adapter.hpp"
#include "optsweep/artifacts.hpp"
#include "optsweep/benchmark_spec.hpp"
#include "optsweep/measure.hpp"
#include "optsweep/pipeline.hpp"
#include "optsweep/profile.hpp"
#include "optsweep/store.hpp"

namespace optsweep {

struct ExploreOptions {
  std::string level = "-O3";
  std::string target = "host";
  int jobs = 1;  // parallel config builds; measurement stays serialized
  StabilityPolicy policy;
  SelectionCriteria criteria;
  std::string artifact_root = "results";
};

/// Full sweep of one benchmark: baselines, then every prefix config in
/// ascending order -- build, time, size, validate -- assembled into a
/// profile. Builds run in parallel up to options.jobs; timing sessions are
/// strictly serialized (one measurement at a time per machine). Every
/// config appears in the result, failed or invalid ones marked as such.
/// Throws BuildFailure when a baseline cannot be built.
ConfigProfile explore_benchmark(const BenchmarkSpec& bench,
                                const PassPipeline& pipeline,
                                CompilerAdapter& adapter,
                                const ExploreOptions& options,
                                ArtifactStore& artifacts);

/// Sweeps every benchmark and assembles an unsaved run record; benchmarks
/// whose baselines fail are recorded under `aborted` and skipped.
RunRecord explore_run(const std::vector<BenchmarkSpec>& benchmarks,
                      const PassPipeline& pipeline, CompilerAdapter& adapter,
                      const ExploreOptions& options);

}  // namespace optsweep

#endif  // OPTSWEEP_EXPLORE_HPP
