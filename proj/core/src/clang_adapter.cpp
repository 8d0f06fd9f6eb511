// SPDX-License-Identifier: Apache-2.0

#include "optsweep/clang_adapter.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "optsweep/errors.hpp"

namespace fs = std::filesystem;

namespace optsweep {

namespace {

std::string find_on_path(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (!path) return {};
  std::istringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    fs::path candidate = fs::path(dir) / name;
    std::error_code ec;
    if (fs::exists(candidate, ec) && !fs::is_directory(candidate, ec) &&
        ::access(candidate.c_str(), X_OK) == 0) {
      return candidate.string();
    }
  }
  return {};
}

std::string find_versioned(const std::string& base) {
  std::string found = find_on_path(base);
  if (!found.empty()) return found;
  for (int v = 21; v >= 6; --v) {
    found = find_on_path(base + "-" + std::to_string(v));
    if (!found.empty()) return found;
  }
  return {};
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out += "'";
  return out;
}

// new-PM rename map for documented legacy flag names that differ
const std::pair<const char*, const char*> kNewPmNames[] = {
    {"functionattrs", "function-attrs"},
    {"loop-unswitch", "simple-loop-unswitch"},
    {"constprop", "sccp"},
    {"ipconstprop", "ipsccp"},
};

std::string new_pm_name(const std::string& legacy) {
  for (const auto& [from, to] : kNewPmNames) {
    if (legacy == from) return to;
  }
  return legacy;
}

int parse_major_version(const std::string& version_output) {
  auto pos = version_output.find("version ");
  if (pos == std::string::npos) return 0;
  return std::atoi(version_output.c_str() + pos + 8);
}

}  // namespace

ClangAdapter::ClangAdapter(LlvmToolchain tools,
                           std::set<std::string> transform_whitelist,
                           std::vector<std::string> backend_passthrough)
    : tools_(std::move(tools)),
      whitelist_(std::move(transform_whitelist)),
      backend_passthrough_(std::move(backend_passthrough)),
      runner_(std::make_unique<ProcessRunner>()) {}

ClangAdapter::~ClangAdapter() = default;

std::optional<LlvmToolchain> ClangAdapter::detect() {
  LlvmToolchain t;
  t.clang = find_versioned("clang");
  t.opt = find_versioned("opt");
  if (t.clang.empty() || t.opt.empty()) return std::nullopt;
  ProcessRunner probe;
  RunOutcome v = probe.run_once(t.clang, {"--version"}, ".", std::nullopt, 30);
  if (v.crashed) return std::nullopt;
  t.major_version = parse_major_version(v.stdout_text);
  return t;
}

std::string ClangAdapter::detect_report() {
  const std::string clang = find_versioned("clang");
  const std::string opt = find_versioned("opt");
  std::string report;
  report += clang.empty() ? "clang: not found on PATH" : "clang: " + clang;
  report += "; ";
  report += opt.empty() ? "opt: not found on PATH" : "opt: " + opt;
  return report;
}

ClangAdapter::ToolResult ClangAdapter::run_tool(
    const std::vector<std::string>& argv) const {
  // run through the shell so stderr lands in the captured log
  std::ostringstream cmd;
  for (const auto& a : argv) cmd << shell_quote(a) << " ";
  cmd << "2>&1";
  ProcessRunner sh;
  RunOutcome out = sh.run_once("/bin/sh", {"-c", cmd.str()}, ".", std::nullopt, 600);
  return {out.exit_code, out.stdout_text};
}

std::string ClangAdapter::compiler_version() const {
  if (version_.empty()) {
    ToolResult v = run_tool({tools_.clang, "--version"});
    version_ = v.output.substr(0, v.output.find('\n'));
  }
  return version_;
}

std::string ClangAdapter::emit_unoptimized_ir(const BenchmarkSpec& bench,
                                              const std::string& out_dir) {
  fs::create_directories(out_dir);
  if (bench.sources.size() != 1) {
    // multi-source front-ends would need llvm-link; out of scope for the
    // adapter until a benchmark needs it
    throw StageFailure(BuildStage::Frontend,
                       "clang adapter supports single-source benchmarks, got " +
                           std::to_string(bench.sources.size()));
  }
  std::string out = (fs::path(out_dir) / "unoptimized.bc").string();
  std::vector<std::string> cmd = {tools_.clang,  "-O0",
                                  "-Xclang",     "-disable-O0-optnone",
                                  "-emit-llvm",  "-c",
                                  bench.sources[0], "-o", out};
  ToolResult r = run_tool(cmd);
  if (r.exit_code != 0) throw StageFailure(BuildStage::Frontend, r.output);
  return out;
}

std::string ClangAdapter::optimize(const std::string& ir_path,
                                   const std::vector<std::string>& flags,
                                   const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::string out = (fs::path(out_dir) / "optimized.bc").string();

  if (flags.empty()) {
    // identity contract: the empty configuration leaves the IR untouched
    std::error_code ec;
    fs::copy_file(ir_path, out, fs::copy_options::overwrite_existing, ec);
    if (ec) throw StageFailure(BuildStage::Optimizer, ec.message());
    return out;
  }

  std::vector<std::string> cmd = {tools_.opt};
  if (new_pass_manager()) {
    std::string passes;
    for (const auto& f : flags) {
      if (!whitelist_.count(f)) continue;  // analyses run on demand
      if (!passes.empty()) passes += ",";
      passes += new_pm_name(f);
    }
    if (passes.empty()) return optimize(ir_path, {}, out_dir);
    cmd.push_back("-passes=" + passes);
  } else {
    for (const auto& f : flags) cmd.push_back("-" + f);
  }
  cmd.push_back(ir_path);
  cmd.push_back("-o");
  cmd.push_back(out);
  ToolResult r = run_tool(cmd);
  if (r.exit_code != 0) throw StageFailure(BuildStage::Optimizer, r.output);
  return out;
}

LinkedArtifacts ClangAdapter::codegen_and_link(const std::string& ir_path,
                                               const BenchmarkSpec& bench,
                                               const std::string& level,
                                               const std::string& out_dir) {
  fs::create_directories(out_dir);
  LinkedArtifacts linked;
  linked.object_path = (fs::path(out_dir) / "object.o").string();
  linked.exe_path = (fs::path(out_dir) / "exe").string();

  std::vector<std::string> obj_cmd = {tools_.clang, level, "-c", ir_path,
                                      "-o", linked.object_path};
  for (const auto& f : backend_passthrough_) obj_cmd.push_back(f);
  ToolResult obj = run_tool(obj_cmd);
  if (obj.exit_code != 0) throw StageFailure(BuildStage::Codegen, obj.output);

  std::vector<std::string> link_cmd = {tools_.clang, level, linked.object_path,
                                       "-o", linked.exe_path};
  for (const auto& f : backend_passthrough_) link_cmd.push_back(f);
  for (const auto& f : bench.link_flags) link_cmd.push_back(f);
  ToolResult lnk = run_tool(link_cmd);
  if (lnk.exit_code != 0) throw StageFailure(BuildStage::Link, lnk.output);

  linked.size_path = linked.exe_path;
  return linked;
}

LinkedArtifacts ClangAdapter::reference_build(const BenchmarkSpec& bench,
                                              const std::string& level,
                                              const std::string& out_dir) {
  fs::create_directories(out_dir);
  LinkedArtifacts linked;
  linked.exe_path = (fs::path(out_dir) / "exe").string();

  std::vector<std::string> cmd = {tools_.clang, level};
  for (const auto& s : bench.sources) cmd.push_back(s);
  cmd.push_back("-o");
  cmd.push_back(linked.exe_path);
  for (const auto& f : backend_passthrough_) cmd.push_back(f);
  for (const auto& f : bench.link_flags) cmd.push_back(f);
  ToolResult r = run_tool(cmd);
  if (r.exit_code != 0) throw StageFailure(BuildStage::Frontend, r.output);

  if (bench.sources.size() == 1) {
    linked.object_path = (fs::path(out_dir) / "object.o").string();
    std::vector<std::string> obj_cmd = {tools_.clang, level, "-c",
                                        bench.sources[0], "-o",
                                        linked.object_path};
    run_tool(obj_cmd);  // retention only; the exe above is authoritative
  }
  linked.size_path = linked.exe_path;
  return linked;
}

std::string flatten_new_pm_pipeline(const std::string& line) {
  std::ostringstream out;
  std::string name;
  int angle_depth = 0;
  auto flush = [&] {
    if (!name.empty()) {
      out << name << "\n";
      name.clear();
    }
  };
  for (char c : line) {
    if (angle_depth > 0) {
      if (c == '>') --angle_depth;
      if (c == '<') ++angle_depth;
      continue;  // parameters are not part of the pass name
    }
    switch (c) {
      case '<': ++angle_depth; break;
      case '(': case ')': case ',': case '\n': case ' ': flush(); break;
      default: name.push_back(c);
    }
  }
  flush();
  return out.str();
}

std::string ClangAdapter::introspect_pipeline(const std::string& level,
                                              const std::string& target) {
  (void)target;  // the host toolchain targets its default triple
  fs::path tmp = fs::temp_directory_path() / "optsweep-empty.ll";
  {
    std::ofstream empty(tmp);
    empty << "";
  }

  std::string opt_level = level;
  if (!opt_level.empty() && opt_level[0] == '-') opt_level.erase(0, 1);

  if (new_pass_manager()) {
    ToolResult r = run_tool({tools_.opt, "-passes=default<" + opt_level + ">",
                             "-print-pipeline-passes", "-disable-output",
                             tmp.string()});
    if (r.exit_code != 0) {
      throw Error("pipeline introspection failed: " + r.output);
    }
    return flatten_new_pm_pipeline(r.output);
  }

  ToolResult r = run_tool({tools_.opt, level, "-disable-output",
                           "-debug-pass=Arguments", tmp.string()});
  if (r.exit_code != 0) {
    throw Error("pipeline introspection failed: " + r.output);
  }
  // every "Pass Arguments:" line carries "-name" tokens
  std::ostringstream out;
  std::istringstream lines(r.output);
  std::string line;
  while (std::getline(lines, line)) {
    auto pos = line.find("Pass Arguments:");
    if (pos == std::string::npos) continue;
    std::istringstream toks(line.substr(pos + 15));
    std::string tok;
    while (toks >> tok) {
      if (tok.size() > 1 && tok[0] == '-') out << tok.substr(1) << "\n";
    }
  }
  return out.str();
}

Runner& ClangAdapter::runner() { return *runner_; }

}  // namespace optsweep
