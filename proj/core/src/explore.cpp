// SPDX-License-Identifier: Apache-2.0

#include "optsweep/explore.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "optsweep/build.hpp"
#include "optsweep/env_probe.hpp"
#include "optsweep/errors.hpp"
#include "optsweep/section_size.hpp"

namespace optsweep {

namespace {

// one timing session at a time, machine-wide
std::mutex g_measurement_token;

MeasurementRecord measure_artifacts(const BuildArtifacts& art, int prefix_len,
                                    const BenchmarkSpec& bench, int loop_count,
                                    const StabilityPolicy& policy,
                                    Runner& runner,
                                    const ReferenceOutput& reference) {
  MeasurementRecord rec;
  rec.config_label = art.config_label;
  rec.prefix_len = prefix_len;
  rec.loop_count = loop_count;

  if (art.status != BuildStatus::Ok) {
    rec.valid = false;
    rec.failure_reason = to_string(art.status) + ": " + art.log;
    return rec;
  }

  try {
    rec.code_size_text = measure_code_size(art.size_path);
  } catch (const Error& e) {
    rec.valid = false;
    rec.failure_reason = std::string("code size: ") + e.what();
    return rec;
  }

  ValidationResult val =
      validate_output(art.exe_path, bench, reference, runner, policy.run_timeout);
  if (!val.ok) {
    rec.valid = false;
    rec.failure_reason = "output validation failed: " + val.diff_excerpt;
    return rec;
  }

  TimingResult timing;
  {
    std::lock_guard token(g_measurement_token);
    timing = measure_time(art.exe_path, bench, loop_count, policy, runner);
  }
  if (timing.crash_reason) {
    rec.valid = false;
    rec.failure_reason = "run crashed: " + *timing.crash_reason;
    return rec;
  }
  rec.exec_time_samples = std::move(timing.samples);
  rec.exec_time_mean = timing.mean;
  rec.exec_time_cv = timing.cv;
  rec.unstable = timing.unstable;
  return rec;
}

}  // namespace

ConfigProfile explore_benchmark(const BenchmarkSpec& bench,
                                const PassPipeline& pipeline,
                                CompilerAdapter& adapter,
                                const ExploreOptions& options,
                                ArtifactStore& artifacts) {
  Runner& runner = adapter.runner();

  BaselineArtifacts base =
      build_baselines(bench, adapter, options.level, artifacts);

  // unoptimized output is the ground truth for every validation
  RunOutcome o0_run = runner.run_once(base.o0.exe_path, bench.run_args,
                                      bench.workdir, bench.expected_input,
                                      options.policy.run_timeout);
  if (o0_run.crashed) {
    throw BuildFailure("benchmark " + bench.id +
                       ": -O0 baseline does not run: " + o0_run.error);
  }
  ReferenceOutput reference{o0_run.exit_code, o0_run.stdout_text};

  // loop count is calibrated once per benchmark, on the reference build,
  // and shared by every config so sessions stay comparable
  int loop_count;
  {
    std::lock_guard token(g_measurement_token);
    loop_count = calibrate(base.reference.exe_path, bench, options.policy, runner);
  }

  ConfigProfile profile;
  profile.benchmark_id = bench.id;
  profile.benchmark_name = bench.name;
  profile.target = options.target;
  profile.level = options.level;
  profile.compiler_version = adapter.compiler_version();

  profile.baseline_o0 = measure_artifacts(base.o0, -1, bench, loop_count,
                                          options.policy, runner, reference);
  profile.baseline_o0_custom =
      measure_artifacts(base.o0_custom, 0, bench, loop_count, options.policy,
                        runner, reference);
  profile.baseline_reference =
      measure_artifacts(base.reference, -1, bench, loop_count, options.policy,
                        runner, reference);
  if (!profile.baseline_reference.valid) {
    throw BuildFailure("benchmark " + bench.id + ": " + options.level +
                       " baseline is invalid: " +
                       profile.baseline_reference.failure_reason.value_or(""));
  }

  const std::vector<OptConfig> configs = generate_configs(pipeline);

  // build phase: configs are independent, run up to `jobs` in parallel
  std::vector<BuildArtifacts> built(configs.size());
  built[0] = base.o0_custom;  // the empty config was built with the baselines
  {
    std::atomic<size_t> next{1};
    const int jobs =
        std::max(1, std::min<int>(options.jobs,
                                  static_cast<int>(configs.size())));
    auto worker = [&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= configs.size()) return;
        built[i] = build_config(bench, configs[i], base.unoptimized_ir,
                                adapter, options.level, artifacts);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // measurement phase: ascending prefix order, serialized
  profile.entries.reserve(configs.size());
  for (size_t i = 0; i < configs.size(); ++i) {
    if (i == 0) {
      MeasurementRecord rec = profile.baseline_o0_custom;
      rec.prefix_len = 0;
      profile.entries.push_back(std::move(rec));
      continue;
    }
    profile.entries.push_back(measure_artifacts(
        built[i], configs[i].prefix_len, bench, loop_count, options.policy,
        runner, reference));
  }
  return profile;
}

RunRecord explore_run(const std::vector<BenchmarkSpec>& benchmarks,
                      const PassPipeline& pipeline, CompilerAdapter& adapter,
                      const ExploreOptions& options) {
  RunRecord run;
  run.target = options.target;
  run.level = options.level;
  run.compiler_version = adapter.compiler_version();
  run.policy = options.policy;
  run.objective = options.criteria.objective;
  run.tie_epsilon = options.criteria.tie_epsilon;
  run.environment = probe_environment();
  {
    using period = std::chrono::steady_clock::period;
    const double ns = 1e9 * period::num / period::den;
    run.environment["timer_resolution_ns"] = std::to_string(ns);
    run.environment["timer"] = "steady_clock";
  }

  ArtifactStore artifacts(options.artifact_root, options.target);
  for (const auto& bench : benchmarks) {
    try {
      run.profiles.push_back(
          explore_benchmark(bench, pipeline, adapter, options, artifacts));
    } catch (const BuildFailure& e) {
      run.aborted[bench.id] = e.what();
    }
  }
  artifacts.write_index();
  return run;
}

}  // namespace optsweep
