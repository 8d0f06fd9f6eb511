// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "optsweep/cli.hpp"
#include "testutil.hpp"

using namespace optsweep;
using testutil::TempDir;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string demo(const std::string& name) {
  return testutil::data_dir() + "/demo/" + name;
}
std::string whitelist_path() {
  return testutil::data_dir() + "/whitelists/llvm-6.0-transform-passes.txt";
}

CliResult explore_demo(const std::string& store, const std::string& run_id,
                       const std::string& model = "") {
  return cli({"explore", "--benchmarks", demo("benchmarks.json"), "--adapter",
              "mock", "--model", model.empty() ? demo("cost-model.json") : model,
              "--pipeline", demo("pipeline-demo.txt"), "--whitelist",
              whitelist_path(), "--target", "mock-x86", "--store", store,
              "--artifact-root", store + "-artifacts", "--run-id", run_id});
}

}  // namespace

TEST_CASE("unknown flags exit 2 with a synopsis") {
  CliResult r = cli({"report", "--no-such-flag"});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("missing command exits 2, help exits 0") {
  CHECK(cli({}).exit_code == 2);
  CliResult help = cli({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("explore") != std::string::npos);
}

TEST_CASE("dry run prints the config list without building") {
  CliResult r = cli({"explore", "--benchmarks", demo("benchmarks.json"),
                     "--adapter", "mock", "--model", demo("cost-model.json"),
                     "--pipeline", demo("pipeline-demo.txt"), "--whitelist",
                     whitelist_path(), "--dry-run", "--store", "/nonexistent"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("-O0-custom") != std::string::npos);
  CHECK(r.out.find("mem2reg - 3") != std::string::npos);
  CHECK(r.out.find("dse - 18") != std::string::npos);
}

TEST_CASE("explore then report round-trips through the store") {
  TempDir tmp;
  CliResult ex = explore_demo(tmp.sub("store"), "cli-run");
  REQUIRE(ex.exit_code == 0);
  CHECK(ex.out == "cli-run\n");

  CliResult rep = cli({"report", "--run", "cli-run", "--store",
                       tmp.sub("store"), "--threshold", "3"});
  CHECK(rep.exit_code == 0);
  CHECK(rep.out.find("loop-rotate - 12") != std::string::npos);

  // idempotent rendering
  CliResult rep2 = cli({"report", "--run", "cli-run", "--store",
                        tmp.sub("store"), "--threshold", "3"});
  CHECK(rep2.out == rep.out);

  CliResult csv = cli({"report", "--run", "cli-run", "--store", tmp.sub("store"),
                       "--format", "csv"});
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.find("cluster,grouped,benchmark_id") == 0);
}

TEST_CASE("diff of two identical runs is empty") {
  TempDir tmp;
  REQUIRE(explore_demo(tmp.sub("store"), "first").exit_code == 0);
  REQUIRE(explore_demo(tmp.sub("store"), "second").exit_code == 0);
  CliResult d = cli({"diff", "--run", "second", "--reference", "first",
                     "--store", tmp.sub("store")});
  CHECK(d.exit_code == 0);
  CHECK(d.out.find("no differences") != std::string::npos);
}

TEST_CASE("config file values apply unless a flag overrides them") {
  TempDir tmp;
  REQUIRE(explore_demo(tmp.sub("store"), "cfg-run").exit_code == 0);

  const std::string cfg = tmp.sub("config.json");
  // threshold 99 hides every row
  std::ofstream(cfg) << R"({"threshold": 99.0, "store": ")" << tmp.sub("store")
                     << R"("})";

  struct Case {
    std::vector<std::string> extra;
    bool expect_rows;
  };
  const Case cases[] = {
      {{}, false},                      // config threshold applies
      {{"--threshold", "3"}, true},     // flag beats config
  };
  for (const auto& c : cases) {
    std::vector<std::string> args{"--config", cfg, "report", "--run", "cfg-run"};
    for (const auto& e : c.extra) args.push_back(e);
    CliResult r = cli(args);
    CHECK(r.exit_code == 0);
    const bool has_rows = r.out.find("loop-rotate - 12") != std::string::npos;
    CHECK(has_rows == c.expect_rows);
  }
}

TEST_CASE("replay registers fixture profiles as a run") {
  TempDir tmp;
  CliResult r = cli({"replay", "--fixtures",
                     testutil::data_dir() + "/reference-reports/i5-6300u-llvm6",
                     "--store", tmp.sub("store"), "--run-id", "i5"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "i5\n");

  CliResult rep = cli({"report", "--run", "i5", "--store", tmp.sub("store")});
  CHECK(rep.exit_code == 0);
  CHECK(rep.out.find("sroa - 9") != std::string::npos);

  CliResult empty = cli({"replay", "--fixtures", tmp.sub("nothing"), "--store",
                         tmp.sub("store")});
  CHECK(empty.exit_code == 3);
}

TEST_CASE("plot data for a stored run") {
  TempDir tmp;
  REQUIRE(explore_demo(tmp.sub("store"), "plot-run").exit_code == 0);
  CliResult r = cli({"emit-plotdata", "--run", "plot-run", "--benchmark", "1",
                     "--store", tmp.sub("store")});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("config,exec_time_improvement_pct") == 0);
  CHECK(r.out.find("\"-O0-custom\"") != std::string::npos);

  CliResult skip = cli({"emit-plotdata", "--run", "plot-run", "--benchmark",
                        "1", "--skip-first", "3", "--store", tmp.sub("store")});
  CHECK(skip.out.find("\"-O0\"") == std::string::npos);

  CliResult missing = cli({"emit-plotdata", "--run", "plot-run", "--benchmark",
                           "99", "--store", tmp.sub("store")});
  CHECK(missing.exit_code == 3);
}

TEST_CASE("a correctness failure in the run gates report and diff exits") {
  TempDir tmp;
  // copy the model and corrupt one benchmark's output at one prefix
  std::ifstream in(demo("cost-model.json"));
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto pos = text.find("\"10\": {");
  REQUIRE(pos != std::string::npos);
  text.insert(pos + 7, "\"invalid_output\": true, ");
  const std::string bad_model = tmp.sub("bad-model.json");
  std::ofstream(bad_model) << text;

  REQUIRE(explore_demo(tmp.sub("store"), "clean").exit_code == 0);
  REQUIRE(explore_demo(tmp.sub("store"), "broken", bad_model).exit_code == 0);

  CliResult rep = cli({"report", "--run", "broken", "--store", tmp.sub("store")});
  CHECK(rep.exit_code == 1);

  CliResult d = cli({"diff", "--run", "broken", "--reference", "clean",
                     "--store", tmp.sub("store")});
  CHECK(d.exit_code == 1);
  CHECK(d.out.find("correctness-regression") != std::string::npos);

  // the clean run diffed against itself still exits 0
  CliResult ok = cli({"diff", "--run", "clean", "--reference", "clean",
                      "--store", tmp.sub("store")});
  CHECK(ok.exit_code == 0);
}

TEST_CASE("extract-pipeline normalizes fixtures and reports truncation points") {
  TempDir tmp;
  CliResult r = cli({"extract-pipeline", "--fixture",
                     testutil::data_dir() + "/pipelines/llvm-6.0-O3-x86_64.txt",
                     "--whitelist", whitelist_path(), "--analyses",
                     testutil::data_dir() +
                         "/whitelists/llvm-6.0-analysis-passes.txt",
                     "--out", tmp.sub("pipeline.txt")});
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("66 transformation truncation points") != std::string::npos);
  // undocumented transforms ride along with a warning
  CHECK(r.err.find("warning: pass 'loop-vectorize'") != std::string::npos);

  // the normalized output is itself a valid fixture
  std::ifstream out(tmp.sub("pipeline.txt"));
  std::ostringstream text;
  text << out.rdbuf();
  auto reparsed = cli({"extract-pipeline", "--fixture", tmp.sub("pipeline.txt"),
                       "--whitelist", whitelist_path(), "--out", "-"});
  CHECK(reparsed.exit_code == 0);
  CHECK(reparsed.err.find("66 transformation truncation points") !=
        std::string::npos);

  // no fixture and no introspectable adapter is a usage error
  CliResult usage = cli({"extract-pipeline", "--adapter", "mock",
                         "--whitelist", whitelist_path()});
  CHECK(usage.exit_code == 2);
}

TEST_CASE("latest selection picks the newest clean run") {
  TempDir tmp;
  REQUIRE(explore_demo(tmp.sub("store"), "older").exit_code == 0);
  REQUIRE(explore_demo(tmp.sub("store"), "newer").exit_code == 0);
  CliResult r = cli({"report", "--latest", "mock-x86", "--store",
                     tmp.sub("store"), "--format", "csv"});
  CHECK(r.exit_code == 0);
  CliResult missing = cli({"report", "--latest", "no-such-target", "--store",
                           tmp.sub("store")});
  CHECK(missing.exit_code == 3);
}
