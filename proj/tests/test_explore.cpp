// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "optsweep/explore.hpp"
#include "optsweep/mock_adapter.hpp"
#include "optsweep/report.hpp"
#include "testutil.hpp"

using namespace optsweep;
using testutil::TempDir;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PassPipeline demo_pipeline() {
  auto whitelist = load_pass_name_list(
      testutil::data_dir() + "/whitelists/llvm-6.0-transform-passes.txt");
  return parse_pipeline(slurp(testutil::data_dir() + "/demo/pipeline-demo.txt"),
                        whitelist, "-O3");
}

CostModel demo_model() {
  return CostModel::from_file(testutil::data_dir() + "/demo/cost-model.json");
}

std::vector<BenchmarkSpec> demo_benchmarks() {
  return load_benchmark_manifest(testutil::data_dir() + "/demo/benchmarks.json");
}

ExploreOptions options_for(TempDir& tmp, int jobs = 1) {
  ExploreOptions o;
  o.target = "mock-x86";
  o.jobs = jobs;
  o.artifact_root = tmp.sub("results");
  o.policy.repetitions = 5;
  o.policy.calibration_min_duration = 0.2;
  return o;
}

}  // namespace

TEST_CASE("exploring one benchmark produces a full ordered profile") {
  TempDir tmp;
  MockAdapter adapter(demo_model());
  ArtifactStore store(tmp.sub("results"), "mock-x86");
  auto benches = demo_benchmarks();
  auto opts = options_for(tmp);

  ConfigProfile p =
      explore_benchmark(benches[0], demo_pipeline(), adapter, opts, store);

  CHECK(p.benchmark_id == "1");
  REQUIRE(p.entries.size() == 11);  // empty + 10 transformation prefixes
  for (size_t i = 1; i < p.entries.size(); ++i) {
    CHECK(p.entries[i - 1].prefix_len < p.entries[i].prefix_len);
    CHECK(p.entries[i].valid);
  }
  CHECK(p.entries[0].config_label == "-O0-custom");
  CHECK(p.baseline_reference.valid);
  CHECK(p.baseline_reference.exec_time_mean == doctest::Approx(0.121));
  // per the cost model, the dip bottoms out at prefix 12
  Selection best = select_best(p, SelectionCriteria{});
  CHECK(best.config_label == "loop-rotate - 12");

  // the front-end ran exactly once for this benchmark
  CHECK(adapter.emit_ir_calls("1") == 1);
  // and the back-end/linker always saw the exploration level
  for (const auto& level : adapter.codegen_levels()) CHECK(level == "-O3");
}

TEST_CASE("full run explores every benchmark and is clean") {
  TempDir tmp;
  MockAdapter adapter(demo_model());
  auto run = explore_run(demo_benchmarks(), demo_pipeline(), adapter,
                         options_for(tmp));
  CHECK(run.profiles.size() == 5);
  CHECK(run.aborted.empty());
  CHECK(run_is_clean(run));
  for (const auto& p : run.profiles) {
    CHECK(p.entries.size() == 11);
    CHECK(p.compiler_version == "mock-llvm 6.0");
  }
  // artifact retention: ir + object + exe per built config
  namespace fs = std::filesystem;
  fs::path cfg_dir =
      fs::path(tmp.sub("results")) / "mock-x86" / "benchmark-1" / "mem2reg-3";
  CHECK(fs::exists(cfg_dir / "optimized.ir"));
  CHECK(fs::exists(cfg_dir / "object.o"));
  CHECK(fs::exists(cfg_dir / "exe"));
  CHECK(fs::exists(cfg_dir / "build.log"));
  CHECK(fs::exists(fs::path(tmp.sub("results")) / "mock-x86" / "index.json"));
}

TEST_CASE("parallel builds produce the same profiles as serial ones") {
  TempDir serial_tmp, parallel_tmp;
  MockAdapter serial_adapter(demo_model());
  MockAdapter parallel_adapter(demo_model());

  auto serial = explore_run(demo_benchmarks(), demo_pipeline(), serial_adapter,
                            options_for(serial_tmp, 1));
  auto parallel = explore_run(demo_benchmarks(), demo_pipeline(),
                              parallel_adapter, options_for(parallel_tmp, 8));
  REQUIRE(serial.profiles.size() == parallel.profiles.size());
  for (size_t i = 0; i < serial.profiles.size(); ++i) {
    const auto& a = serial.profiles[i];
    const auto& b = parallel.profiles[i];
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t j = 0; j < a.entries.size(); ++j) {
      CHECK(a.entries[j].config_label == b.entries[j].config_label);
      CHECK(a.entries[j].exec_time_mean ==
            doctest::Approx(b.entries[j].exec_time_mean));
      CHECK(a.entries[j].code_size_text == b.entries[j].code_size_text);
    }
  }
}

TEST_CASE("a failing config is recorded and the sweep continues") {
  CostModel model = demo_model();
  model.benchmarks["1"].prefixes[7].fail_stage = "codegen";
  TempDir tmp;
  MockAdapter adapter(std::move(model));
  auto run = explore_run(demo_benchmarks(), demo_pipeline(), adapter,
                         options_for(tmp));
  REQUIRE(run.profiles.size() == 5);
  const auto& p = run.profiles[0];
  REQUIRE(p.entries.size() == 11);
  int invalid = 0;
  for (const auto& e : p.entries) {
    if (!e.valid) {
      ++invalid;
      CHECK(e.config_label == "simplifycfg - 7");
      REQUIRE(e.failure_reason.has_value());
      CHECK(e.failure_reason->find("codegen") != std::string::npos);
    }
  }
  CHECK(invalid == 1);
  CHECK_FALSE(run_is_clean(run));

  // no silent gaps: the failed config still left a directory with its log
  namespace fs = std::filesystem;
  CHECK(fs::exists(fs::path(tmp.sub("results")) / "mock-x86" / "benchmark-1" /
                   "simplifycfg-7" / "build.log"));

  // the invalid record is excluded from selection downstream
  Selection best = select_best(p, SelectionCriteria{});
  CHECK(best.config_label != "simplifycfg - 7");
}

TEST_CASE("an injected validation failure invalidates exactly one record") {
  CostModel model = demo_model();
  model.benchmarks["2"].prefixes[10].invalid_output = true;
  TempDir tmp;
  MockAdapter adapter(std::move(model));
  auto run = explore_run(demo_benchmarks(), demo_pipeline(), adapter,
                         options_for(tmp));
  int invalid = 0;
  for (const auto& p : run.profiles) {
    for (const auto& e : p.entries) {
      if (!e.valid) {
        ++invalid;
        CHECK(p.benchmark_id == "2");
        CHECK(e.config_label == "jump-threading - 10");
        CHECK(e.failure_reason->find("validation") != std::string::npos);
      }
    }
  }
  CHECK(invalid == 1);
}

TEST_CASE("a benchmark whose baseline fails aborts only that benchmark") {
  CostModel model = demo_model();
  model.benchmarks["3"].prefixes[0].fail_stage = "optimizer";  // -O0-custom
  TempDir tmp;
  MockAdapter adapter(std::move(model));
  auto run = explore_run(demo_benchmarks(), demo_pipeline(), adapter,
                         options_for(tmp));
  CHECK(run.profiles.size() == 4);
  REQUIRE(run.aborted.size() == 1);
  CHECK(run.aborted.count("3") == 1);
  CHECK_FALSE(run_is_clean(run));
}

TEST_CASE("a three-point cost model selects the fastest prefix") {
  // prefix 0: 100 ms / 4096 B, prefix 1: 80 ms / 4096 B, prefix 2: 90 ms / 3072 B
  CostModel model = CostModel::from_json_text(R"({
    "benchmarks": {"m": {"output": "ok\n", "prefixes": {
      "0": {"time_s": 0.100, "size": 4096},
      "1": {"time_s": 0.080, "size": 4096},
      "2": {"time_s": 0.090, "size": 3072}}}}
  })");
  PassPipeline pipe = parse_pipeline("t1\nt2", {"t1", "t2"}, "-O3");
  BenchmarkSpec spec;
  spec.id = "m";
  spec.name = "minimal";
  spec.sources = {"m.c"};

  TempDir tmp;
  MockAdapter adapter(std::move(model));
  ArtifactStore store(tmp.sub("results"), "mock");
  ConfigProfile p =
      explore_benchmark(spec, pipe, adapter, options_for(tmp), store);
  REQUIRE(p.entries.size() == 3);
  Selection best = select_best(p, SelectionCriteria{});
  CHECK(best.config_label == "t1 - 1");
  CHECK(best.improvement_pct.at(kExecTime) < 0.0);
}

TEST_CASE("a dip-shaped cost model on the full x86-64 pipeline classifies "
          "as sroa-9 / simplifycfg-34") {
  // synthesize per-prefix costs over the recorded x86-64 pipeline: slow
  // until the first sroa, a deepening dip through instcombine - 33, gains
  // gone from simplifycfg - 34 onward
  auto whitelist = load_pass_name_list(
      testutil::data_dir() + "/whitelists/llvm-6.0-transform-passes.txt");
  PassPipeline pipe = parse_pipeline(
      slurp(testutil::data_dir() + "/pipelines/llvm-6.0-O3-x86_64.txt"),
      whitelist, "-O3");
  auto configs = generate_configs(pipe);
  REQUIRE(configs.size() == 67);

  CostModel model;
  model.target = "mock-i5";
  BenchmarkCost bench;
  bench.output = "jchuff ok\n";
  int dip_start = -1, dip_end = -1;
  for (size_t i = 1; i < configs.size(); ++i) {
    if (config_label(configs[i]) == "sroa - 9") dip_start = int(i);
    if (config_label(configs[i]) == "instcombine - 33") dip_end = int(i);
  }
  REQUIRE(dip_start > 0);
  REQUIRE(dip_end > dip_start);
  for (size_t i = 0; i < configs.size(); ++i) {
    CostPoint pt;
    pt.size_bytes = 16384;
    const int k = static_cast<int>(i);
    if (k < dip_start) {
      pt.time_s = 2.5;
    } else if (k <= dip_end) {
      pt.time_s = 0.35 - 0.06 * (k - dip_start) / double(dip_end - dip_start);
    } else {
      pt.time_s = 1.0;
    }
    bench.prefixes[configs[i].prefix_len] = pt;
  }
  bench.reference = CostPoint{1.0, 16384, "", false, 0};
  model.benchmarks["8"] = bench;

  TempDir tmp;
  MockAdapter adapter(std::move(model));
  ArtifactStore store(tmp.sub("results"), "mock-i5");
  BenchmarkSpec spec;
  spec.id = "8";
  spec.name = "consumer-jpeg-c-src-jchuff-9-1";
  spec.sources = {"jchuff.c"};
  auto opts = options_for(tmp);
  opts.target = "mock-i5";

  ConfigProfile p = explore_benchmark(spec, pipe, adapter, opts, store);
  REQUIRE(p.entries.size() == 67);
  CHECK(first_better_config(p, 0.01, 2) == "sroa - 9");
  CHECK(gains_removing_config(p, "sroa - 9", 0.01) == "simplifycfg - 34");
  Selection best = select_best(p, SelectionCriteria{});
  CHECK(best.config_label == "instcombine - 33");
}

TEST_CASE("missing cost-model prefixes surface as failed configs") {
  CostModel model = demo_model();
  model.benchmarks["4"].prefixes.erase(13);
  TempDir tmp;
  MockAdapter adapter(std::move(model));
  auto run = explore_run(demo_benchmarks(), demo_pipeline(), adapter,
                         options_for(tmp));
  const ConfigProfile* p4 = nullptr;
  for (const auto& p : run.profiles) {
    if (p.benchmark_id == "4") p4 = &p;
  }
  REQUIRE(p4 != nullptr);
  int invalid = 0;
  for (const auto& e : p4->entries) {
    if (!e.valid) ++invalid;
  }
  CHECK(invalid == 1);
}
