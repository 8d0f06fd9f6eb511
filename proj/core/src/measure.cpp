// SPDX-License-Identifier: Apache-2.0

#include "optsweep/measure.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "optsweep/errors.hpp"

namespace optsweep {

double mean_of(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double s : samples) sum += s;
  return sum / static_cast<double>(samples.size());
}

double cv_of(const std::vector<double>& samples) {
  if (samples.size() < 2) return 0.0;
  const double mu = mean_of(samples);
  if (mu == 0.0) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += (s - mu) * (s - mu);
  return std::sqrt(acc / static_cast<double>(samples.size())) / mu;
}

int calibrate(const std::string& exe, const BenchmarkSpec& bench,
              const StabilityPolicy& policy, Runner& runner) {
  int loop_count = 1;
  for (;;) {
    RunOutcome probe = runner.run_repeated(exe, bench.run_args, bench.workdir,
                                           bench.expected_input, loop_count,
                                           policy.run_timeout);
    if (probe.timed_out) {
      throw CalibrationFailure("calibration probe timed out: " + probe.error);
    }
    if (probe.crashed) {
      throw CalibrationFailure("calibration probe crashed: " + probe.error);
    }
    if (probe.wall_seconds >= policy.calibration_min_duration) {
      return loop_count;
    }
    if (loop_count > (1 << 28)) {
      throw CalibrationFailure("calibration did not converge: " + exe);
    }
    loop_count *= 2;
  }
}

namespace {

TimingResult run_sessions(const std::string& exe, const BenchmarkSpec& bench,
                          int loop_count, const StabilityPolicy& policy,
                          Runner& runner) {
  TimingResult result;
  result.samples.reserve(static_cast<size_t>(policy.repetitions));
  for (int session = 0; session < policy.repetitions; ++session) {
    RunOutcome r = runner.run_repeated(exe, bench.run_args, bench.workdir,
                                       bench.expected_input, loop_count,
                                       policy.run_timeout);
    if (r.crashed || r.timed_out) {
      result.crash_reason = "session " + std::to_string(session + 1) + " of " +
                            std::to_string(policy.repetitions) + ": " + r.error;
      return result;
    }
    result.samples.push_back(r.wall_seconds / loop_count);
  }
  result.mean = mean_of(result.samples);
  result.cv = cv_of(result.samples);
  result.unstable = result.cv > policy.cv_threshold;
  return result;
}

}  // namespace

TimingResult measure_time(const std::string& exe, const BenchmarkSpec& bench,
                          int loop_count, const StabilityPolicy& policy,
                          Runner& runner) {
  TimingResult result = run_sessions(exe, bench, loop_count, policy, runner);
  if (result.unstable && !policy.warn_only && !result.crash_reason) {
    result = run_sessions(exe, bench, loop_count, policy, runner);
  }
  return result;
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

bool parse_number(const std::string& tok, double* out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size()) return false;
  *out = v;
  return true;
}

std::string excerpt(const std::string& a, const std::string& b) {
  size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  auto clip = [&](const std::string& s) {
    size_t from = i >= 20 ? i - 20 : 0;
    std::string piece = s.substr(from, 60);
    for (char& c : piece) {
      if (c == '\n') c = ' ';
    }
    return piece;
  };
  return "first difference at byte " + std::to_string(i) + ": expected '..." +
         clip(b) + "' got '..." + clip(a) + "'";
}

}  // namespace

ValidationResult compare_outputs(const std::string& actual,
                                 const std::string& expected,
                                 std::optional<double> numeric_tolerance) {
  ValidationResult res;
  if (!numeric_tolerance) {
    if (actual == expected) {
      res.ok = true;
      return res;
    }
    res.diff_excerpt = excerpt(actual, expected);
    return res;
  }

  auto at = tokenize(actual);
  auto et = tokenize(expected);
  if (at.size() != et.size()) {
    res.diff_excerpt = "token count differs: " + std::to_string(at.size()) +
                       " vs " + std::to_string(et.size());
    return res;
  }
  for (size_t i = 0; i < at.size(); ++i) {
    double a = 0, e = 0;
    if (parse_number(at[i], &a) && parse_number(et[i], &e)) {
      if (std::abs(a - e) > *numeric_tolerance) {
        res.diff_excerpt = "token " + std::to_string(i + 1) + ": |" + at[i] +
                           " - " + et[i] + "| > tolerance";
        return res;
      }
    } else if (at[i] != et[i]) {
      res.diff_excerpt =
          "token " + std::to_string(i + 1) + ": '" + at[i] + "' vs '" + et[i] + "'";
      return res;
    }
  }
  res.ok = true;
  return res;
}

ValidationResult validate_output(const std::string& exe,
                                 const BenchmarkSpec& bench,
                                 const ReferenceOutput& reference,
                                 Runner& runner, double timeout_seconds) {
  RunOutcome r = runner.run_once(exe, bench.run_args, bench.workdir,
                                 bench.expected_input, timeout_seconds);
  if (r.exit_code != reference.exit_code) {
    ValidationResult res;
    res.diff_excerpt = "exit code " + std::to_string(r.exit_code) +
                       " != reference " + std::to_string(reference.exit_code);
    return res;
  }
  return compare_outputs(r.stdout_text, reference.stdout_text,
                         bench.numeric_tolerance);
}

}  // namespace optsweep
