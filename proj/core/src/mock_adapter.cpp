// SPDX-License-Identifier: Apache-2.0

#include "optsweep/mock_adapter.hpp"

#include <sys/stat.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "optsweep/errors.hpp"
#include "optsweep/synthetic_binary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace optsweep {

namespace {

const char kB64[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::string& in) {
  std::string out;
  int val = 0, bits = -6;
  for (unsigned char c : in) {
    val = (val << 8) + c;
    bits += 8;
    while (bits >= 0) {
      out.push_back(kB64[(val >> bits) & 0x3f]);
      bits -= 6;
    }
  }
  if (bits > -6) out.push_back(kB64[((val << 8) >> (bits + 8)) & 0x3f]);
  while (out.size() % 4) out.push_back('=');
  return out;
}

std::string b64_decode(const std::string& in) {
  std::vector<int> rev(256, -1);
  for (int i = 0; i < 64; ++i) rev[static_cast<unsigned char>(kB64[i])] = i;
  std::string out;
  int val = 0, bits = -8;
  for (unsigned char c : in) {
    if (rev[c] == -1) break;  // '=' padding or junk
    val = (val << 6) + rev[c];
    bits += 6;
    if (bits >= 0) {
      out.push_back(static_cast<char>((val >> bits) & 0xff));
      bits -= 8;
    }
  }
  return out;
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

CostPoint cost_from_json(const json& j) {
  CostPoint p;
  p.time_s = j.at("time_s").get<double>();
  p.size_bytes = j.value("size", std::uint64_t{0});
  p.fail_stage = j.value("fail_stage", std::string{});
  p.invalid_output = j.value("invalid_output", false);
  p.exit_code = j.value("exit_code", 0);
  return p;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string header_value(const std::string& text, const std::string& key) {
  auto pos = text.find("# " + key + ": ");
  if (pos == std::string::npos) return {};
  pos += key.size() + 4;
  auto end = text.find('\n', pos);
  return text.substr(pos, end == std::string::npos ? end : end - pos);
}

}  // namespace

CostModel CostModel::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("cost model: ") + e.what());
  }
  CostModel model;
  model.target = doc.value("target", std::string("mock"));
  model.compiler_version =
      doc.value("compiler_version", std::string("mock-toolchain"));
  for (const auto& [id, b] : doc.at("benchmarks").items()) {
    BenchmarkCost bench;
    bench.output = b.value("output", std::string("ok\n"));
    for (const auto& [k, v] : b.at("prefixes").items()) {
      bench.prefixes[std::stoi(k)] = cost_from_json(v);
    }
    if (bench.prefixes.empty()) {
      throw SchemaMismatch("cost model benchmark " + id + ": no prefixes");
    }
    bench.o0 = b.contains("o0") ? cost_from_json(b["o0"])
                                : bench.prefixes.begin()->second;
    if (b.contains("reference")) {
      bench.reference = cost_from_json(b["reference"]);
    }
    model.benchmarks[id] = std::move(bench);
  }
  return model;
}

CostModel CostModel::from_file(const std::string& path) {
  return from_json_text(read_text_file(path));
}

const BenchmarkCost& CostModel::bench(const std::string& id) const {
  auto it = benchmarks.find(id);
  if (it == benchmarks.end()) {
    throw Error("cost model has no benchmark '" + id + "'");
  }
  return it->second;
}

const CostPoint& CostModel::prefix_cost(const std::string& id,
                                        int prefix_len) const {
  const auto& b = bench(id);
  auto it = b.prefixes.find(prefix_len);
  if (it == b.prefixes.end()) {
    throw UnknownPrefix("cost model benchmark '" + id +
                        "' has no entry for prefix " +
                        std::to_string(prefix_len));
  }
  return it->second;
}

MockAdapter::MockAdapter(CostModel model, std::string pipeline_text)
    : model_(std::move(model)),
      pipeline_text_(std::move(pipeline_text)),
      runner_(std::make_unique<SyntheticRunner>()) {}

MockAdapter::~MockAdapter() = default;

std::string MockAdapter::compiler_version() const {
  return model_.compiler_version;
}

std::string MockAdapter::emit_unoptimized_ir(const BenchmarkSpec& bench,
                                             const std::string& out_dir) {
  {
    std::lock_guard lock(mu_);
    ++emit_calls_[bench.id];
  }
  fs::create_directories(out_dir);
  std::string path = (fs::path(out_dir) / "unoptimized.ir").string();
  std::ofstream out(path);
  out << "; synthetic unoptimized IR\n; benchmark: " << bench.id << "\n";
  return path;
}

std::string MockAdapter::optimize(const std::string& ir_path,
                                  const std::vector<std::string>& flags,
                                  const std::string& out_dir) {
  std::string ir = read_text_file(ir_path);
  auto pos = ir.find("; benchmark: ");
  if (pos == std::string::npos) {
    throw StageFailure(BuildStage::Optimizer, "not a synthetic IR file");
  }
  std::string bench_id = ir.substr(pos + 13);
  bench_id.erase(bench_id.find_first_of("\n\r"));

  int prefix = static_cast<int>(flags.size());
  const CostPoint& cost = model_.prefix_cost(bench_id, prefix);
  if (cost.fail_stage == "optimizer") {
    throw StageFailure(BuildStage::Optimizer,
                       "synthetic optimizer failure at prefix " +
                           std::to_string(prefix));
  }
  fs::create_directories(out_dir);
  std::string path = (fs::path(out_dir) / "optimized.ir").string();
  std::ofstream out(path);
  out << "; synthetic optimized IR\n; benchmark: " << bench_id
      << "\n; prefix: " << prefix << "\n";
  for (const auto& f : flags) out << "; flag: " << f << "\n";
  return path;
}

LinkedArtifacts MockAdapter::write_linked(const std::string& bench_id,
                                          const CostPoint& cost,
                                          const std::string& output,
                                          const std::string& out_dir) {
  fs::create_directories(out_dir);
  LinkedArtifacts linked;
  linked.object_path = (fs::path(out_dir) / "object.o").string();
  write_minimal_elf(linked.object_path, {cost.size_bytes});

  std::string body = cost.invalid_output
                         ? "SYNTHETIC-CORRUPTION\n" + output
                         : output;
  linked.exe_path = (fs::path(out_dir) / "exe").string();
  {
    std::ofstream out(linked.exe_path);
    out << "#!/bin/sh\n"
        << "# synthetic benchmark artifact (mock toolchain)\n"
        << "# synthetic-benchmark: " << bench_id << "\n"
        << "# synthetic-time-s: " << cost.time_s << "\n"
        << "# synthetic-exit: " << cost.exit_code << "\n"
        << "# synthetic-output-b64: " << b64_encode(body) << "\n"
        << "printf '%s' " << shell_quote(body) << "\n"
        << "exit " << cost.exit_code << "\n";
  }
  ::chmod(linked.exe_path.c_str(), 0755);
  // scripts have no .text section; point size extraction at the object
  linked.size_path = linked.object_path;
  return linked;
}

LinkedArtifacts MockAdapter::codegen_and_link(const std::string& ir_path,
                                              const BenchmarkSpec& bench,
                                              const std::string& level,
                                              const std::string& out_dir) {
  {
    std::lock_guard lock(mu_);
    codegen_levels_.push_back(level);
  }
  std::string ir = read_text_file(ir_path);
  auto pos = ir.find("; prefix: ");
  if (pos == std::string::npos) {
    throw StageFailure(BuildStage::Codegen, "not a synthetic optimized IR file");
  }
  std::string num = ir.substr(pos + 10);
  num.erase(num.find_first_of("\n\r"));
  int prefix = std::stoi(num);

  const CostPoint& cost = model_.prefix_cost(bench.id, prefix);
  if (cost.fail_stage == "codegen") {
    throw StageFailure(BuildStage::Codegen,
                       "synthetic codegen failure at prefix " + num);
  }
  if (cost.fail_stage == "link") {
    throw StageFailure(BuildStage::Link,
                       "synthetic link failure at prefix " + num);
  }
  return write_linked(bench.id, cost, model_.bench(bench.id).output, out_dir);
}

LinkedArtifacts MockAdapter::reference_build(const BenchmarkSpec& bench,
                                             const std::string& level,
                                             const std::string& out_dir) {
  const BenchmarkCost& b = model_.bench(bench.id);
  CostPoint cost;
  if (level == "-O0") {
    cost = b.o0;
  } else if (b.reference) {
    cost = *b.reference;
  } else {
    cost = b.prefixes.rbegin()->second;  // full prefix stands in for the level
  }
  if (!cost.fail_stage.empty()) {
    throw StageFailure(BuildStage::Frontend,
                       "synthetic reference build failure at " + level);
  }
  return write_linked(bench.id, cost, b.output, out_dir);
}

std::string MockAdapter::introspect_pipeline(const std::string& level,
                                             const std::string& target) {
  (void)level;
  (void)target;
  if (pipeline_text_.empty()) {
    throw Error("mock adapter was constructed without a pipeline listing");
  }
  return pipeline_text_;
}

Runner& MockAdapter::runner() { return *runner_; }

int MockAdapter::emit_ir_calls(const std::string& bench_id) const {
  std::lock_guard lock(mu_);
  auto it = emit_calls_.find(bench_id);
  return it == emit_calls_.end() ? 0 : it->second;
}

std::vector<std::string> MockAdapter::codegen_levels() const {
  std::lock_guard lock(mu_);
  return codegen_levels_;
}

RunOutcome SyntheticRunner::run_once(const std::string& exe,
                                     const std::vector<std::string>& args,
                                     const std::string& workdir,
                                     const std::optional<std::string>& stdin_path,
                                     double timeout_seconds) {
  return run_repeated(exe, args, workdir, stdin_path, 1, timeout_seconds);
}

RunOutcome SyntheticRunner::run_repeated(
    const std::string& exe, const std::vector<std::string>& /*args*/,
    const std::string& /*workdir*/,
    const std::optional<std::string>& /*stdin_path*/, int iterations,
    double /*timeout_seconds*/) {
  RunOutcome out;
  std::string text;
  try {
    text = read_text_file(exe);
  } catch (const Error& e) {
    out.crashed = true;
    out.error = e.what();
    return out;
  }
  std::string time_s = header_value(text, "synthetic-time-s");
  if (time_s.empty()) {
    out.crashed = true;
    out.error = exe + " is not a synthetic benchmark artifact";
    return out;
  }
  out.wall_seconds = std::stod(time_s) * iterations;
  std::string exit_s = header_value(text, "synthetic-exit");
  out.exit_code = exit_s.empty() ? 0 : std::stoi(exit_s);
  out.stdout_text = b64_decode(header_value(text, "synthetic-output-b64"));
  if (out.exit_code != 0) {
    out.crashed = true;
    out.error = "exit code " + std::to_string(out.exit_code);
  }
  return out;
}

}  // namespace optsweep
