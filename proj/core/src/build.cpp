// SPDX-License-Identifier: Apache-2.0

#include "optsweep/build.hpp"

#include <filesystem>
#include <fstream>

#include "optsweep/errors.hpp"

namespace fs = std::filesystem;

namespace optsweep {

namespace {

void write_log(const std::string& dir, const std::string& text) {
  std::ofstream out(fs::path(dir) / "build.log");
  out << text;
}

BuildStatus status_for(BuildStage stage) {
  switch (stage) {
    case BuildStage::Frontend: return BuildStatus::FrontendFailed;
    case BuildStage::Optimizer: return BuildStatus::OptimizerFailed;
    case BuildStage::Codegen: return BuildStatus::CodegenFailed;
    case BuildStage::Link: return BuildStatus::LinkFailed;
  }
  return BuildStatus::LinkFailed;
}

BuildArtifacts monolithic_build(const BenchmarkSpec& bench,
                                CompilerAdapter& adapter,
                                const std::string& level,
                                const std::string& label,
                                ArtifactStore& store) {
  const std::string dir = store.config_dir(bench.id, label);
  BuildArtifacts art;
  art.config_label = label;
  try {
    LinkedArtifacts linked = adapter.reference_build(bench, level, dir);
    art.object_path = linked.object_path;
    art.exe_path = linked.exe_path;
    art.size_path = linked.size_path.empty() ? linked.exe_path : linked.size_path;
    art.log = "reference build at " + level + " ok";
  } catch (const StageFailure& e) {
    art.status = status_for(e.stage());
    art.log = e.what();
  } catch (const BuildFailure& e) {
    art.status = BuildStatus::FrontendFailed;
    art.log = e.what();
  }
  write_log(dir, art.log);
  store.record(bench.id, art);
  return art;
}

}  // namespace

BaselineArtifacts build_baselines(const BenchmarkSpec& bench,
                                  CompilerAdapter& adapter,
                                  const std::string& level,
                                  ArtifactStore& store) {
  BaselineArtifacts base;
  base.o0 = monolithic_build(bench, adapter, "-O0", "-O0", store);
  if (base.o0.status != BuildStatus::Ok) {
    throw BuildFailure("benchmark " + bench.id + ": -O0 baseline failed: " +
                       base.o0.log);
  }
  base.reference = monolithic_build(bench, adapter, level, level, store);
  if (base.reference.status != BuildStatus::Ok) {
    throw BuildFailure("benchmark " + bench.id + ": " + level +
                       " baseline failed: " + base.reference.log);
  }

  // front-end once per benchmark; every config reuses this IR
  const std::string ir_dir = store.config_dir(bench.id, "frontend");
  BuildArtifacts custom;
  custom.config_label = "-O0-custom";
  try {
    base.unoptimized_ir = adapter.emit_unoptimized_ir(bench, ir_dir);
  } catch (const BuildFailure& e) {
    custom.status = BuildStatus::FrontendFailed;
    custom.log = e.what();
    write_log(ir_dir, custom.log);
    store.record(bench.id, custom);
    throw BuildFailure("benchmark " + bench.id + ": front-end failed: " +
                       custom.log);
  }

  // -O0-custom: the split pipeline with no optimizer flags; doubles as the
  // prefix-0 entry of the sweep
  OptConfig empty;
  empty.prefix_len = 0;
  custom = build_config(bench, empty, base.unoptimized_ir, adapter, level, store);
  if (custom.status != BuildStatus::Ok) {
    throw BuildFailure("benchmark " + bench.id +
                       ": -O0-custom baseline failed: " + custom.log);
  }
  base.o0_custom = custom;
  return base;
}

BuildArtifacts build_config(const BenchmarkSpec& bench, const OptConfig& config,
                            const std::string& cached_ir,
                            CompilerAdapter& adapter, const std::string& level,
                            ArtifactStore& store) {
  const std::string label = config_label(config);
  const std::string dir = store.config_dir(bench.id, label);
  BuildArtifacts art;
  art.config_label = label;
  try {
    art.ir_path = adapter.optimize(cached_ir, config.flags, dir);
  } catch (const StageFailure& e) {
    art.status = status_for(e.stage());
    art.log = e.what();
  } catch (const BuildFailure& e) {
    art.status = BuildStatus::OptimizerFailed;
    art.log = e.what();
  }
  if (art.status == BuildStatus::Ok) {
    try {
      LinkedArtifacts linked =
          adapter.codegen_and_link(art.ir_path, bench, level, dir);
      art.object_path = linked.object_path;
      art.exe_path = linked.exe_path;
      art.size_path =
          linked.size_path.empty() ? linked.exe_path : linked.size_path;
      art.log = "built with " + std::to_string(config.flags.size()) +
                " flags; back-end at " + level;
    } catch (const StageFailure& e) {
      art.status = status_for(e.stage());
      art.log = e.what();
    } catch (const BuildFailure& e) {
      art.status = BuildStatus::CodegenFailed;
      art.log = e.what();
    }
  }
  write_log(dir, art.log);
  store.record(bench.id, art);
  return art;
}

}  // namespace optsweep
