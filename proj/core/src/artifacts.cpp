// SPDX-License-Identifier: Apache-2.0

#include "optsweep/artifacts.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "optsweep/errors.hpp"

extern char** environ;

namespace fs = std::filesystem;
using nlohmann::json;

namespace optsweep {

std::string to_string(BuildStatus s) {
  switch (s) {
    case BuildStatus::Ok: return "ok";
    case BuildStatus::FrontendFailed: return "frontend-failed";
    case BuildStatus::OptimizerFailed: return "optimizer-failed";
    case BuildStatus::CodegenFailed: return "codegen-failed";
    case BuildStatus::LinkFailed: return "link-failed";
  }
  return "unknown";
}

RunOutcome Runner::run_repeated(const std::string& exe,
                                const std::vector<std::string>& args,
                                const std::string& workdir,
                                const std::optional<std::string>& stdin_path,
                                int iterations, double timeout_seconds) {
  RunOutcome total;
  for (int i = 0; i < iterations; ++i) {
    RunOutcome one = run_once(exe, args, workdir, stdin_path, timeout_seconds);
    total.wall_seconds += one.wall_seconds;
    total.exit_code = one.exit_code;
    total.stdout_text = std::move(one.stdout_text);
    if (one.crashed || one.timed_out) {
      total.crashed = one.crashed;
      total.timed_out = one.timed_out;
      total.error = one.error + " (iteration " + std::to_string(i + 1) + ")";
      return total;
    }
  }
  return total;
}

RunOutcome ProcessRunner::run_once(const std::string& exe,
                                   const std::vector<std::string>& args,
                                   const std::string& workdir,
                                   const std::optional<std::string>& stdin_path,
                                   double timeout_seconds) {
  RunOutcome out;

  int pipefd[2];
  if (pipe(pipefd) != 0) {
    out.crashed = true;
    out.error = "pipe() failed";
    return out;
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipefd[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipefd[0]);
  posix_spawn_file_actions_addclose(&actions, pipefd[1]);
  if (stdin_path) {
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO,
                                     stdin_path->c_str(), O_RDONLY, 0);
  }
  if (!workdir.empty() && workdir != ".") {
    // glibc >= 2.29
    posix_spawn_file_actions_addchdir_np(&actions, workdir.c_str());
  }

  std::vector<std::string> argv_store;
  argv_store.push_back(exe);
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  auto start = std::chrono::steady_clock::now();
  pid_t pid = -1;
  int rc = posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv.data(),
                       environ);
  posix_spawn_file_actions_destroy(&actions);
  close(pipefd[1]);

  if (rc != 0) {
    close(pipefd[0]);
    out.crashed = true;
    out.error = "cannot spawn " + exe + ": " + std::strerror(rc);
    return out;
  }

  // drain stdout while watching the deadline
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(timeout_seconds));
  char buf[4096];
  bool open = true;
  while (open) {
    struct pollfd pfd{pipefd[0], POLLIN, 0};
    int pr = poll(&pfd, 1, 50);
    if (pr > 0) {
      ssize_t n = read(pipefd[0], buf, sizeof buf);
      if (n > 0) {
        out.stdout_text.append(buf, static_cast<size_t>(n));
      } else {
        open = false;
      }
    }
    if (timeout_seconds > 0 && std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      out.timed_out = true;
      out.error = "timed out after " + std::to_string(timeout_seconds) + " s";
      open = false;
    }
  }
  close(pipefd[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (WIFSIGNALED(status)) {
    out.crashed = true;
    out.exit_code = 128 + WTERMSIG(status);
    out.error = "terminated by signal " + std::to_string(WTERMSIG(status));
  } else {
    out.exit_code = WEXITSTATUS(status);
    if (out.exit_code != 0) {
      out.crashed = true;
      if (out.error.empty()) {
        out.error = "exit code " + std::to_string(out.exit_code);
      }
    }
  }
  if (out.timed_out) out.crashed = true;
  return out;
}

ArtifactStore::ArtifactStore(std::string root, std::string target)
    : root_(std::move(root)), target_(std::move(target)) {
  fs::create_directories(fs::path(root_) / target_);
}

std::string ArtifactStore::sanitize_label(const std::string& label) {
  std::string out;
  bool pending_dash = false;
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '/' || c == '\\') {
      pending_dash = !out.empty();
      continue;
    }
    if (c == '-' && out.empty()) continue;  // "-O3" -> "O3"
    if (c == '-') {
      pending_dash = true;
      continue;
    }
    if (pending_dash) {
      out.push_back('-');
      pending_dash = false;
    }
    out.push_back(c);
  }
  return out.empty() ? "config" : out;
}

std::string ArtifactStore::config_dir(const std::string& bench_id,
                                      const std::string& label) {
  fs::path dir = fs::path(root_) / target_ / ("benchmark-" + bench_id) /
                 sanitize_label(label);
  fs::create_directories(dir);
  return dir.string();
}

void ArtifactStore::record(const std::string& bench_id,
                           const BuildArtifacts& artifacts) {
  std::lock_guard lock(mu_);
  entries_.push_back({bench_id, artifacts});
}

void ArtifactStore::write_index() const {
  std::lock_guard lock(mu_);
  json idx;
  idx["schema_version"] = 1;
  idx["target"] = target_;
  idx["artifacts"] = json::array();
  for (const auto& e : entries_) {
    json j;
    j["benchmark_id"] = e.bench_id;
    j["config_label"] = e.artifacts.config_label;
    j["status"] = to_string(e.artifacts.status);
    auto put = [&](const char* key, const std::string& path) {
      if (path.empty()) return;
      j[key] = path;
      if (e.artifacts.status == BuildStatus::Ok && fs::exists(path)) {
        j[std::string(key) + "_checksum"] = file_checksum_hex(path);
      }
    };
    put("ir", e.artifacts.ir_path);
    put("object", e.artifacts.object_path);
    put("exe", e.artifacts.exe_path);
    idx["artifacts"].push_back(std::move(j));
  }
  fs::path final_path = fs::path(root_) / target_ / "index.json";
  fs::path tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path);
    out << idx.dump(1) << "\n";
  }
  fs::rename(tmp_path, final_path);
}

namespace {
constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

std::string fnv_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}
}  // namespace

std::string bytes_checksum_hex(const std::string& bytes) {
  uint64_t h = kFnvOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return fnv_hex(h);
}

std::string file_checksum_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for checksum: " + path);
  uint64_t h = kFnvOffset;
  char buf[8192];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= kFnvPrime;
    }
  }
  return fnv_hex(h);
}

}  // namespace optsweep
