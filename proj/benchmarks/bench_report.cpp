// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "optsweep/render.hpp"
#include "optsweep/report.hpp"

using namespace optsweep;

namespace {

ConfigProfile synthetic_profile(std::mt19937_64& rng, int entries) {
  std::uniform_real_distribution<double> t(0.5, 1.5);
  ConfigProfile p;
  p.benchmark_id = std::to_string(rng() % 1000);
  p.level = "-O3";
  for (int i = 0; i < entries; ++i) {
    MeasurementRecord r;
    r.config_label = "cfg - " + std::to_string(i + 1);
    r.prefix_len = i + 1;
    r.exec_time_mean = t(rng);
    r.code_size_text = 1000 + static_cast<std::uint64_t>(rng() % 512);
    p.entries.push_back(std::move(r));
  }
  MeasurementRecord base;
  base.config_label = "-O3";
  base.exec_time_mean = 1.0;
  base.code_size_text = 1200;
  p.baseline_reference = base;
  return p;
}

}  // namespace

static void bm_classify_profile(benchmark::State& state) {
  std::mt19937_64 rng(11);
  ConfigProfile p = synthetic_profile(rng, int(state.range(0)));
  ReportParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_profile(p, params));
  }
}
BENCHMARK(bm_classify_profile)->Arg(67)->Arg(256);

static void bm_build_report(benchmark::State& state) {
  std::mt19937_64 rng(13);
  std::vector<ConfigProfile> profiles;
  for (int i = 0; i < state.range(0); ++i) {
    profiles.push_back(synthetic_profile(rng, 67));
  }
  ReportParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_regression_report(profiles, params));
  }
}
BENCHMARK(bm_build_report)->Arg(42)->Arg(200);

static void bm_select_best(benchmark::State& state) {
  std::mt19937_64 rng(17);
  ConfigProfile p = synthetic_profile(rng, int(state.range(0)));
  SelectionCriteria criteria;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_best(p, criteria));
  }
}
BENCHMARK(bm_select_best)->Arg(67)->Arg(256);

static void bm_render_text(benchmark::State& state) {
  std::mt19937_64 rng(19);
  std::vector<ConfigProfile> profiles;
  for (int i = 0; i < 42; ++i) profiles.push_back(synthetic_profile(rng, 67));
  ReportParams params;
  auto clusters = build_regression_report(profiles, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_report_text(clusters, "-O3"));
  }
}
BENCHMARK(bm_render_text);
