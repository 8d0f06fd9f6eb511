// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_ENV_PROBE_HPP
#define OPTSWEEP_ENV_PROBE_HPP

#include <map>
#include <string>

namespace optsweep {

/// Timing-relevant machine state recorded into every run: clock source,
/// CPU frequency governors, machine identity. Keys missing on a platform
/// are simply absent.
std::map<std::string, std::string> probe_environment();

/// Human advice when the environment looks noisy for timing (frequency
/// scaling active and the like); empty when nothing stands out.
std::string stability_advice(const std::map<std::string, std::string>& env);

}  // namespace optsweep

#endif  // OPTSWEEP_ENV_PROBE_HPP
