// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "optsweep/pipeline.hpp"

using namespace optsweep;

namespace {

std::string random_pipeline_text(int n) {
  std::mt19937_64 rng(n);
  std::uniform_int_distribution<int> pick(0, 19);
  std::ostringstream text;
  for (int i = 0; i < n; ++i) {
    const int v = pick(rng);
    text << (v < 10 ? "t" : "a") << v % 10 << "\n";
  }
  return text.str();
}

std::set<std::string> small_whitelist() {
  std::set<std::string> wl;
  for (int i = 0; i < 10; ++i) wl.insert("t" + std::to_string(i));
  return wl;
}

std::string fixture_text() {
  std::ifstream in(std::string(OPTSWEEP_DATA_DIR) +
                   "/pipelines/llvm-6.0-O3-x86_64.txt");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

static void bm_parse_pipeline(benchmark::State& state) {
  const std::string text = random_pipeline_text(int(state.range(0)));
  const auto wl = small_whitelist();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_pipeline(text, wl, "-O3"));
  }
}
BENCHMARK(bm_parse_pipeline)->Arg(64)->Arg(256)->Arg(1024);

static void bm_generate_configs(benchmark::State& state) {
  PassPipeline pipe = parse_pipeline(random_pipeline_text(int(state.range(0))),
                                     small_whitelist(), "-O3");
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_configs(pipe));
  }
}
BENCHMARK(bm_generate_configs)->Arg(64)->Arg(256)->Arg(1024);

static void bm_parse_recorded_o3(benchmark::State& state) {
  const std::string text = fixture_text();
  const auto wl = load_pass_name_list(std::string(OPTSWEEP_DATA_DIR) +
                                      "/whitelists/llvm-6.0-transform-passes.txt");
  for (auto _ : state) {
    auto pipe = parse_pipeline(text, wl, "-O3");
    benchmark::DoNotOptimize(generate_configs(pipe));
  }
}
BENCHMARK(bm_parse_recorded_o3);
