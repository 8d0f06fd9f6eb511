// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "optsweep/errors.hpp"
#include "optsweep/store.hpp"
#include "testutil.hpp"

using namespace optsweep;
using testutil::TempDir;
using testutil::record;

namespace {

ConfigProfile sample_profile(const std::string& id, bool valid = true) {
  ConfigProfile p;
  p.benchmark_id = id;
  p.benchmark_name = "bench-" + id;
  p.target = "testbox";
  p.level = "-O3";
  p.compiler_version = "mock 1.0";
  auto mk = [&](const std::string& label, int prefix, double t) {
    auto r = record(label, prefix, t, 1000 + prefix);
    r.exec_time_samples = {t * 0.5, t * 1.5};
    r.exec_time_mean = (r.exec_time_samples[0] + r.exec_time_samples[1]) / 2;
    return r;
  };
  p.entries = {mk("-O0-custom", 0, 2.0), mk("t - 2", 2, 0.8)};
  if (!valid) {
    p.entries[1].valid = false;
    p.entries[1].failure_reason = "synthetic failure";
  }
  p.baseline_o0 = mk("-O0", -1, 2.0);
  p.baseline_o0_custom = p.entries[0];
  p.baseline_reference = mk("-O3", -1, 1.0);
  return p;
}

RunRecord sample_run(const std::string& id, bool valid = true) {
  RunRecord run;
  run.run_id = id;
  run.target = "testbox";
  run.compiler_version = "mock 1.0";
  run.level = "-O3";
  run.environment["clock_source"] = "tsc";
  run.profiles = {sample_profile("1", valid), sample_profile("2")};
  return run;
}

}  // namespace

TEST_CASE("save and load round-trips the full record") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  std::string id = store.save_run(sample_run("run-a"));
  CHECK(id == "run-a");

  RunRecord loaded = store.load_run("run-a");
  CHECK(loaded.target == "testbox");
  CHECK(loaded.level == "-O3");
  CHECK(loaded.environment.at("clock_source") == "tsc");
  REQUIRE(loaded.profiles.size() == 2);
  const auto& p = loaded.profiles[0];
  CHECK(p.benchmark_id == "1");
  CHECK(p.entries.size() == 2);
  CHECK(p.entries[1].config_label == "t - 2");
  CHECK(p.entries[1].exec_time_samples.size() == 2);
  CHECK(p.baseline_reference.exec_time_mean == doctest::Approx(1.0));
}

TEST_CASE("profile documents round-trip through their text form") {
  ConfigProfile p = sample_profile("7", false);
  p.classification = PrecomputedClassification{"a - 1", "b - 2", "a - 1", -12.5};
  ConfigProfile q = profile_from_json_text(profile_to_json_text(p));
  CHECK(q.benchmark_id == p.benchmark_id);
  CHECK(q.entries.size() == p.entries.size());
  CHECK(q.entries[1].valid == false);
  CHECK(q.entries[1].failure_reason.value() == "synthetic failure");
  REQUIRE(q.classification.has_value());
  CHECK(q.classification->gains_removing == "b - 2");
  CHECK(q.classification->exec_reduction_pct == doctest::Approx(-12.5));
}

TEST_CASE("random records survive the round trip") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> t(0.001, 5.0);
  std::uniform_int_distribution<int> n(0, 30);
  for (int iter = 0; iter < 100; ++iter) {
    ConfigProfile p;
    p.benchmark_id = std::to_string(iter);
    p.target = "rt";
    const int count = n(rng);
    for (int i = 0; i <= count; ++i) {
      auto r = record("c - " + std::to_string(i), i, t(rng), i * 7 + 1);
      r.exec_time_samples = {r.exec_time_mean};
      p.entries.push_back(r);
    }
    p.baseline_reference = record("-O3", -1, t(rng), 555);
    ConfigProfile q = profile_from_json_text(profile_to_json_text(p));
    REQUIRE(q.entries.size() == p.entries.size());
    for (size_t i = 0; i < p.entries.size(); ++i) {
      CHECK(q.entries[i].config_label == p.entries[i].config_label);
      CHECK(q.entries[i].exec_time_mean ==
            doctest::Approx(p.entries[i].exec_time_mean).epsilon(1e-15));
      CHECK(q.entries[i].code_size_text == p.entries[i].code_size_text);
    }
  }
}

TEST_CASE("duplicate run ids are rejected") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  store.save_run(sample_run("dup"));
  CHECK_THROWS_AS(store.save_run(sample_run("dup")), DuplicateRunId);
}

TEST_CASE("loading unknown runs reports NotFound") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  CHECK_THROWS_AS(store.load_run("nothing"), NotFound);
}

TEST_CASE("tampering with a profile file is detected") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  store.save_run(sample_run("sealed"));

  namespace fs = std::filesystem;
  fs::path profile = fs::path(tmp.sub("store")) / "runs" / "sealed" /
                     "profiles" / "benchmark-1.json";
  REQUIRE(fs::exists(profile));
  {
    std::fstream f(profile, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(120);
    f.put('X');  // flip one byte
  }
  CHECK_THROWS_AS(store.load_run("sealed"), CorruptRecord);
}

TEST_CASE("later saves do not re-bless a tampered run document") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  store.save_run(sample_run("victim"));

  namespace fs = std::filesystem;
  fs::path doc = fs::path(tmp.sub("store")) / "runs" / "victim" / "run.json";
  {
    std::ofstream f(doc, std::ios::app);
    f << "\n";
  }
  store.save_run(sample_run("later"));  // must carry the old checksum forward
  CHECK_THROWS_AS(store.load_run("victim"), CorruptRecord);
  CHECK_NOTHROW(store.load_run("later"));
}

TEST_CASE("a garbage document in a fixture directory is rejected") {
  TempDir tmp;
  std::filesystem::create_directories(tmp.sub("fixtures"));
  std::ofstream(tmp.sub("fixtures") + "/broken.json") << "{not json";
  CHECK_THROWS_AS(load_profile_fixtures(tmp.sub("fixtures")), SchemaMismatch);

  std::ofstream(tmp.sub("fixtures") + "/wrong-kind.json") << R"({"kind":"x"})";
  CHECK_THROWS_AS(load_profile_fixtures(tmp.sub("fixtures")), SchemaMismatch);
}

TEST_CASE("an interrupted save never publishes a run") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  store.save_run(sample_run("good"));

  // fake a crash mid-save: a fully staged directory that never reached the
  // index rewrite
  namespace fs = std::filesystem;
  fs::path stage = fs::path(tmp.sub("store")) / "runs" / ".stage-crashed";
  fs::create_directories(stage / "profiles");
  std::ofstream(stage / "run.json") << "{\"kind\":\"run\"}";

  auto runs = store.list_runs();
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].run_id == "good");
  CHECK_THROWS_AS(store.load_run(".stage-crashed"), NotFound);

  // index updates go through a temp file + rename; a leftover temp must
  // not break listing either
  std::ofstream(fs::path(tmp.sub("store")) / "index.json.tmp") << "garbage";
  CHECK(store.list_runs().size() == 1);
}

TEST_CASE("latest_reference returns the newest clean run") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  CHECK_FALSE(store.latest_reference("testbox").has_value());

  store.save_run(sample_run("clean-old"));
  store.save_run(sample_run("dirty-new", /*valid=*/false));
  auto ref = store.latest_reference("testbox");
  REQUIRE(ref.has_value());
  CHECK(*ref == "clean-old");  // the newer run has a correctness failure

  store.save_run(sample_run("clean-new"));
  CHECK(*store.latest_reference("testbox") == "clean-new");
  CHECK_FALSE(store.latest_reference("otherbox").has_value());
}

TEST_CASE("index rows keep save order") {
  TempDir tmp;
  RunStore store(tmp.sub("store"));
  store.save_run(sample_run("one"));
  store.save_run(sample_run("two"));
  store.save_run(sample_run("three"));
  auto runs = store.list_runs();
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].run_id == "one");
  CHECK(runs[2].run_id == "three");
}

TEST_CASE("fixture replay loads profile documents from a directory") {
  auto profiles = load_profile_fixtures(testutil::data_dir() +
                                        "/reference-reports/i5-6300u-llvm6");
  CHECK(profiles.size() == 21);
  for (const auto& p : profiles) {
    CHECK(p.target == "i5-6300U");
    CHECK(p.classification.has_value());
  }
}

TEST_CASE("replaying an empty directory is a schema mismatch") {
  TempDir tmp;
  CHECK_THROWS_AS(load_profile_fixtures(tmp.sub("empty")), SchemaMismatch);
  std::filesystem::create_directories(tmp.sub("empty"));
  CHECK_THROWS_AS(load_profile_fixtures(tmp.sub("empty")), SchemaMismatch);
}

TEST_CASE("stored mean must agree with stored samples") {
  ConfigProfile p = sample_profile("1");
  std::string text = profile_to_json_text(p);
  auto pos = text.find("\"exec_time_mean_s\"");
  REQUIRE(pos != std::string::npos);
  std::string broken = text;
  broken.replace(pos, std::string("\"exec_time_mean_s\"").size(),
                 "\"exec_time_mean_s_\"");
  // renaming the key zeroes the mean, contradicting the samples
  CHECK_THROWS_AS(profile_from_json_text(broken), SchemaMismatch);
}
