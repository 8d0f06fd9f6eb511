// SPDX-License-Identifier: Apache-2.0

#include "optsweep/env_probe.hpp"

#include <sys/utsname.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace optsweep {

namespace {

std::string read_trimmed(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::string s;
  std::getline(in, s);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) {
    s.pop_back();
  }
  return s;
}

}  // namespace

std::map<std::string, std::string> probe_environment() {
  std::map<std::string, std::string> env;

  struct utsname un{};
  if (uname(&un) == 0) {
    env["machine"] = std::string(un.nodename);
    env["arch"] = std::string(un.machine);
    env["os"] = std::string(un.sysname) + " " + un.release;
  }

  std::string clock =
      read_trimmed("/sys/devices/system/clocksource/clocksource0/current_clocksource");
  if (!clock.empty()) env["clock_source"] = clock;

  std::set<std::string> governors;
  std::error_code ec;
  for (const auto& cpu :
       fs::directory_iterator("/sys/devices/system/cpu", ec)) {
    const auto gov_path = cpu.path() / "cpufreq" / "scaling_governor";
    if (fs::exists(gov_path, ec)) {
      std::string g = read_trimmed(gov_path.string());
      if (!g.empty()) governors.insert(g);
    }
  }
  if (!governors.empty()) {
    std::ostringstream joined;
    for (const auto& g : governors) {
      if (joined.tellp() > 0) joined << ",";
      joined << g;
    }
    env["cpu_governor"] = joined.str();
  }
  return env;
}

std::string stability_advice(const std::map<std::string, std::string>& env) {
  std::ostringstream advice;
  auto gov = env.find("cpu_governor");
  if (gov != env.end() && gov->second != "performance") {
    advice << "CPU frequency governor is '" << gov->second
           << "'; pin the frequency (governor 'performance') before timing. ";
  }
  if (!env.count("cpu_governor")) {
    advice << "Could not read CPU governor state; confirm frequency scaling "
              "is disabled. ";
  }
  advice << "For wireless-equipped boards, disable WiFi/Bluetooth and idle "
            "background services while measuring.";
  auto s = advice.str();
  // advice only when something actionable showed up
  if (gov != env.end() && gov->second == "performance") return {};
  return s;
}

}  // namespace optsweep
