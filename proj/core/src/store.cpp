// SPDX-License-Identifier: Apache-2.0

#include "optsweep/store.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "optsweep/artifacts.hpp"
#include "optsweep/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace optsweep {

namespace {

constexpr int kSchemaVersion = 1;

json record_to_json(const MeasurementRecord& r) {
  json j;
  j["config_label"] = r.config_label;
  if (r.prefix_len >= 0) j["prefix_len"] = r.prefix_len;
  j["exec_time_mean_s"] = r.exec_time_mean;
  j["exec_time_samples_s"] = r.exec_time_samples;
  j["exec_time_cv"] = r.exec_time_cv;
  j["code_size_text_bytes"] = r.code_size_text;
  j["loop_count"] = r.loop_count;
  j["valid"] = r.valid;
  if (r.failure_reason) j["failure_reason"] = *r.failure_reason;
  if (r.unstable) j["unstable"] = true;
  j["metrics"] = r.metrics;
  return j;
}

MeasurementRecord record_from_json(const json& j) {
  MeasurementRecord r;
  r.config_label = j.value("config_label", std::string{});
  r.prefix_len = j.value("prefix_len", -1);
  r.exec_time_mean = j.value("exec_time_mean_s", 0.0);
  if (j.contains("exec_time_samples_s")) {
    r.exec_time_samples = j["exec_time_samples_s"].get<std::vector<double>>();
  }
  r.exec_time_cv = j.value("exec_time_cv", 0.0);
  r.code_size_text = j.value("code_size_text_bytes", std::uint64_t{0});
  r.loop_count = j.value("loop_count", 1);
  r.valid = j.value("valid", true);
  if (j.contains("failure_reason")) {
    r.failure_reason = j["failure_reason"].get<std::string>();
  }
  r.unstable = j.value("unstable", false);
  if (j.contains("metrics")) {
    r.metrics = j["metrics"].get<std::map<std::string, double>>();
  }
  if (!r.exec_time_samples.empty()) {
    const double recomputed = mean_of(r.exec_time_samples);
    const double denom = std::max(std::abs(r.exec_time_mean), 1e-300);
    if (std::abs(recomputed - r.exec_time_mean) / denom > 1e-9) {
      throw SchemaMismatch("record '" + r.config_label +
                           "': stored mean disagrees with samples");
    }
  }
  return r;
}

json profile_to_json(const ConfigProfile& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "profile";
  j["benchmark_id"] = p.benchmark_id;
  j["benchmark_name"] = p.benchmark_name;
  j["target"] = p.target;
  j["level"] = p.level;
  j["compiler_version"] = p.compiler_version;
  j["entries"] = json::array();
  for (const auto& e : p.entries) j["entries"].push_back(record_to_json(e));
  j["baselines"] = json::object();
  if (p.baseline_o0.exec_time_mean > 0 || !p.baseline_o0.config_label.empty()) {
    j["baselines"]["o0"] = record_to_json(p.baseline_o0);
  }
  if (p.baseline_o0_custom.exec_time_mean > 0 ||
      !p.baseline_o0_custom.config_label.empty()) {
    j["baselines"]["o0_custom"] = record_to_json(p.baseline_o0_custom);
  }
  if (p.baseline_reference.exec_time_mean > 0 ||
      !p.baseline_reference.config_label.empty()) {
    j["baselines"]["reference"] = record_to_json(p.baseline_reference);
  }
  if (p.classification) {
    json c;
    c["first_better"] = p.classification->first_better;
    c["gains_removing"] = p.classification->gains_removing;
    c["best_overall"] = p.classification->best_overall;
    c["exec_reduction_pct"] = p.classification->exec_reduction_pct;
    j["classification"] = std::move(c);
  }
  return j;
}

ConfigProfile profile_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", std::string{}) != "profile") {
    throw SchemaMismatch("not a profile document");
  }
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw SchemaMismatch("unsupported profile schema_version");
  }
  ConfigProfile p;
  p.benchmark_id = j.value("benchmark_id", std::string{});
  if (p.benchmark_id.empty()) throw SchemaMismatch("profile without benchmark_id");
  p.benchmark_name = j.value("benchmark_name", std::string{});
  p.target = j.value("target", std::string{});
  p.level = j.value("level", std::string("-O3"));
  p.compiler_version = j.value("compiler_version", std::string{});
  if (j.contains("entries")) {
    for (const auto& e : j["entries"]) p.entries.push_back(record_from_json(e));
  }
  if (j.contains("baselines")) {
    const auto& b = j["baselines"];
    if (b.contains("o0")) p.baseline_o0 = record_from_json(b["o0"]);
    if (b.contains("o0_custom")) {
      p.baseline_o0_custom = record_from_json(b["o0_custom"]);
    }
    if (b.contains("reference")) {
      p.baseline_reference = record_from_json(b["reference"]);
    }
  }
  if (j.contains("classification")) {
    const auto& c = j["classification"];
    PrecomputedClassification cls;
    cls.first_better = c.value("first_better", std::string(kNoPattern));
    cls.gains_removing = c.value("gains_removing", std::string(kNoPattern));
    cls.best_overall = c.value("best_overall", std::string{});
    cls.exec_reduction_pct = c.value("exec_reduction_pct", 0.0);
    p.classification = std::move(cls);
  }
  return p;
}

void atomic_write(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      if (errno == ENOSPC) throw StorageFull("no space writing " + path.string());
      throw Error("write failed: " + path.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("missing file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string now_utc_iso() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool run_is_clean(const RunRecord& run) {
  if (!run.aborted.empty()) return false;
  for (const auto& p : run.profiles) {
    for (const auto& e : p.entries) {
      if (!e.valid) return false;
    }
    if (!p.baseline_o0.valid || !p.baseline_o0_custom.valid ||
        !p.baseline_reference.valid) {
      return false;
    }
  }
  return true;
}

std::string profile_to_json_text(const ConfigProfile& profile) {
  return profile_to_json(profile).dump(1) + "\n";
}

ConfigProfile profile_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("profile document: ") + e.what());
  }
  return profile_from_json(j);
}

RunStore::RunStore(std::string root) : root_(std::move(root)) {
  fs::create_directories(fs::path(root_) / "runs");
}

std::string RunStore::make_run_id(const std::string& target) {
  static std::mt19937_64 rng{std::random_device{}()};
  char suffix[8];
  std::snprintf(suffix, sizeof suffix, "%04x",
                static_cast<unsigned>(rng() & 0xffff));
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  return std::string(stamp) + "-" + ArtifactStore::sanitize_label(target) +
         "-" + suffix;
}

std::string RunStore::save_run(const RunRecord& run_in) {
  RunRecord run = run_in;
  if (run.run_id.empty()) run.run_id = make_run_id(run.target);
  if (run.created_utc.empty()) run.created_utc = now_utc_iso();

  for (const auto& row : list_runs()) {
    if (row.run_id == run.run_id) {
      throw DuplicateRunId("run id already stored: " + run.run_id);
    }
  }
  const fs::path run_dir = fs::path(root_) / "runs" / run.run_id;
  if (fs::exists(run_dir)) {
    throw DuplicateRunId("run directory already exists: " + run.run_id);
  }

  // stage everything, then publish via the index
  const fs::path stage = fs::path(root_) / "runs" / (".stage-" + run.run_id);
  fs::create_directories(stage / "profiles");

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "run";
  doc["run_id"] = run.run_id;
  doc["target"] = run.target;
  doc["compiler_version"] = run.compiler_version;
  doc["level"] = run.level;
  doc["created_utc"] = run.created_utc;
  doc["policy"] = {{"repetitions", run.policy.repetitions},
                   {"calibration_min_duration_s", run.policy.calibration_min_duration},
                   {"cv_threshold", run.policy.cv_threshold},
                   {"warn_only", run.policy.warn_only}};
  doc["criteria"] = {{"objective", run.objective},
                     {"tie_epsilon", run.tie_epsilon}};
  doc["environment"] = run.environment;
  doc["aborted"] = run.aborted;
  doc["profiles"] = json::array();

  for (const auto& p : run.profiles) {
    const std::string rel = "profiles/benchmark-" + p.benchmark_id + ".json";
    const std::string text = profile_to_json_text(p);
    atomic_write(stage / rel, text);
    doc["profiles"].push_back(
        {{"benchmark_id", p.benchmark_id},
         {"file", rel},
         {"checksum", bytes_checksum_hex(text)}});
  }
  atomic_write(stage / "run.json", doc.dump(1) + "\n");
  fs::rename(stage, run_dir);

  // publish: append a row to the index; existing rows (and their recorded
  // checksums) are carried over untouched
  json idx;
  const fs::path index_path = fs::path(root_) / "index.json";
  if (fs::exists(index_path)) {
    idx = json::parse(read_file(index_path));
  } else {
    idx["schema_version"] = kSchemaVersion;
    idx["runs"] = json::array();
  }
  idx["runs"].push_back({{"run_id", run.run_id},
                         {"target", run.target},
                         {"created_utc", run.created_utc},
                         {"clean", run_is_clean(run)},
                         {"checksum", file_checksum_hex(
                              (run_dir / "run.json").string())}});
  atomic_write(index_path, idx.dump(1) + "\n");
  return run.run_id;
}

std::vector<RunIndexRow> RunStore::list_runs() const {
  const fs::path index_path = fs::path(root_) / "index.json";
  std::vector<RunIndexRow> rows;
  if (!fs::exists(index_path)) return rows;
  json idx;
  try {
    idx = json::parse(read_file(index_path));
  } catch (const json::exception& e) {
    throw CorruptRecord(std::string("run index: ") + e.what());
  }
  for (const auto& r : idx.value("runs", json::array())) {
    RunIndexRow row;
    row.run_id = r.value("run_id", std::string{});
    row.target = r.value("target", std::string{});
    row.created_utc = r.value("created_utc", std::string{});
    row.clean = r.value("clean", false);
    rows.push_back(std::move(row));
  }
  return rows;
}

RunRecord RunStore::load_run(const std::string& run_id) const {
  const fs::path run_dir = fs::path(root_) / "runs" / run_id;
  const fs::path run_json = run_dir / "run.json";
  bool indexed = false;
  std::string index_checksum;
  json idx;
  const fs::path index_path = fs::path(root_) / "index.json";
  if (fs::exists(index_path)) {
    idx = json::parse(read_file(index_path));
    for (const auto& r : idx.value("runs", json::array())) {
      if (r.value("run_id", std::string{}) == run_id) {
        indexed = true;
        index_checksum = r.value("checksum", std::string{});
      }
    }
  }
  if (!indexed || !fs::exists(run_json)) {
    throw NotFound("run not found: " + run_id);
  }
  if (!index_checksum.empty() &&
      file_checksum_hex(run_json.string()) != index_checksum) {
    throw CorruptRecord("run document checksum mismatch: " + run_id);
  }

  json doc = json::parse(read_file(run_json));
  RunRecord run;
  run.run_id = doc.value("run_id", run_id);
  run.target = doc.value("target", std::string{});
  run.compiler_version = doc.value("compiler_version", std::string{});
  run.level = doc.value("level", std::string("-O3"));
  run.created_utc = doc.value("created_utc", std::string{});
  if (doc.contains("policy")) {
    const auto& pl = doc["policy"];
    run.policy.repetitions = pl.value("repetitions", 10);
    run.policy.calibration_min_duration =
        pl.value("calibration_min_duration_s", 1.0);
    run.policy.cv_threshold = pl.value("cv_threshold", 0.05);
    run.policy.warn_only = pl.value("warn_only", true);
  }
  if (doc.contains("criteria")) {
    const auto& cr = doc["criteria"];
    if (cr.contains("objective")) {
      run.objective = cr["objective"].get<std::vector<std::string>>();
    }
    run.tie_epsilon = cr.value("tie_epsilon", 0.005);
  }
  if (doc.contains("environment")) {
    run.environment =
        doc["environment"].get<std::map<std::string, std::string>>();
  }
  if (doc.contains("aborted")) {
    run.aborted = doc["aborted"].get<std::map<std::string, std::string>>();
  }
  for (const auto& pr : doc.value("profiles", json::array())) {
    const std::string rel = pr.value("file", std::string{});
    const std::string text = read_file(run_dir / rel);
    const std::string want = pr.value("checksum", std::string{});
    if (!want.empty() && bytes_checksum_hex(text) != want) {
      throw CorruptRecord("profile checksum mismatch: " + run_id + "/" + rel);
    }
    run.profiles.push_back(profile_from_json_text(text));
  }
  return run;
}

std::optional<std::string> RunStore::latest_reference(
    const std::string& target) const {
  std::optional<std::string> found;
  for (const auto& row : list_runs()) {  // index rows are in save order
    if (row.target == target && row.clean) found = row.run_id;
  }
  return found;
}

std::vector<ConfigProfile> load_profile_fixtures(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw SchemaMismatch("fixture directory does not exist: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ConfigProfile> profiles;
  for (const auto& f : files) {
    profiles.push_back(profile_from_json_text(read_file(f)));
  }
  if (profiles.empty()) {
    throw SchemaMismatch("no profile documents found in " + dir);
  }
  for (const auto& p : profiles) {
    if (p.target != profiles.front().target) {
      throw SchemaMismatch("fixture profiles disagree on target: '" +
                           p.target + "' vs '" + profiles.front().target + "'");
    }
  }
  return profiles;
}

}  // namespace optsweep
