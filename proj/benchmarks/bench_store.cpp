// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "optsweep/store.hpp"

using namespace optsweep;

namespace {

ConfigProfile profile_with_series(int entries) {
  std::mt19937_64 rng(entries);
  std::uniform_real_distribution<double> t(0.5, 1.5);
  ConfigProfile p;
  p.benchmark_id = "1";
  p.target = "bench";
  for (int i = 0; i < entries; ++i) {
    MeasurementRecord r;
    r.config_label = "cfg - " + std::to_string(i + 1);
    r.prefix_len = i + 1;
    r.exec_time_samples.assign(10, t(rng));
    r.exec_time_mean = r.exec_time_samples[0];
    r.code_size_text = 4096;
    p.entries.push_back(std::move(r));
  }
  MeasurementRecord base;
  base.config_label = "-O3";
  base.exec_time_mean = 1.0;
  base.exec_time_samples = {1.0};
  base.code_size_text = 4096;
  p.baseline_reference = base;
  return p;
}

}  // namespace

static void bm_profile_serialize(benchmark::State& state) {
  ConfigProfile p = profile_with_series(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(profile_to_json_text(p));
  }
}
BENCHMARK(bm_profile_serialize)->Arg(67)->Arg(256);

static void bm_profile_parse(benchmark::State& state) {
  std::string text = profile_to_json_text(profile_with_series(int(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(profile_from_json_text(text));
  }
}
BENCHMARK(bm_profile_parse)->Arg(67)->Arg(256);
