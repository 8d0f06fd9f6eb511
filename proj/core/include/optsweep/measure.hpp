// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_MEASURE_HPP
#define OPTSWEEP_MEASURE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optsweep/artifacts.hpp"
#include "optsweep/benchmark_spec.hpp"

namespace optsweep {

/// Per-config resource usage. exec_time_mean is the arithmetic mean of
/// exec_time_samples; cv is the population standard deviation divided by
/// the mean. valid is false whenever output validation failed or any
/// sample run crashed.
struct MeasurementRecord {
  std::string config_label;
  int prefix_len = -1;  // -1 for baselines that are not sweep entries
  double exec_time_mean = 0.0;
  std::vector<double> exec_time_samples;
  double exec_time_cv = 0.0;
  std::uint64_t code_size_text = 0;
  int loop_count = 1;
  bool valid = true;
  std::optional<std::string> failure_reason;
  bool unstable = false;  // cv exceeded the policy threshold
  std::map<std::string, double> metrics;  // extension slot (counters, energy)
};

struct StabilityPolicy {
  int repetitions = 10;
  double calibration_min_duration = 1.0;  // seconds
  double cv_threshold = 0.05;
  bool warn_only = true;          // flag unstable records instead of retrying
  double run_timeout = 300.0;     // hard per-session timeout, seconds
};

struct TimingResult {
  std::vector<double> samples;  // per-iteration seconds, one per session
  double mean = 0.0;
  double cv = 0.0;
  bool unstable = false;
  std::optional<std::string> crash_reason;  // set when a session crashed
};

double mean_of(const std::vector<double>& samples);
/// Population coefficient of variation: sqrt(sum((x-mean)^2)/n) / mean.
double cv_of(const std::vector<double>& samples);

/// Smallest power-of-two loop count whose measured total wall time reaches
/// policy.calibration_min_duration. Probes double the count until the
/// threshold is met. Throws CalibrationFailure when a probe crashes or
/// exceeds the hard timeout.
int calibrate(const std::string& exe, const BenchmarkSpec& bench,
              const StabilityPolicy& policy, Runner& runner);

/// policy.repetitions timed sessions of loop_count executions each;
/// per-iteration time is session wall time / loop_count. A crashing
/// session stops measurement and reports the session index. When cv
/// exceeds the threshold the result is flagged (warn_only) or the whole
/// measurement is retried once (strict).
TimingResult measure_time(const std::string& exe, const BenchmarkSpec& bench,
                          int loop_count, const StabilityPolicy& policy,
                          Runner& runner);

/// Reference output captured from the -O0 baseline build.
struct ReferenceOutput {
  int exit_code = 0;
  std::string stdout_text;
};

struct ValidationResult {
  bool ok = false;
  std::string diff_excerpt;
};

/// True iff exit code matches and stdout matches byte-for-byte, or -- when
/// the benchmark declares a numeric tolerance -- tokenwise with numeric
/// tokens compared within that absolute tolerance.
ValidationResult validate_output(const std::string& exe,
                                 const BenchmarkSpec& bench,
                                 const ReferenceOutput& reference,
                                 Runner& runner,
                                 double timeout_seconds = 300.0);

/// Comparison core used by validate_output; exposed for direct testing.
ValidationResult compare_outputs(const std::string& actual,
                                 const std::string& expected,
                                 std::optional<double> numeric_tolerance);

}  // namespace optsweep

#endif  // OPTSWEEP_MEASURE_HPP
