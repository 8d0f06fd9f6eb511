// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_CLI_HPP
#define OPTSWEEP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace optsweep {

/// Dispatches one command-line invocation.
///
/// Commands: extract-pipeline, explore, report, diff, replay,
/// emit-plotdata. Machine output goes to `out`, diagnostics to `err`.
///
/// Exit codes: 0 success; 1 a correctness regression was found (report,
/// diff); 2 usage error; 3 environment, toolchain or storage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace optsweep

#endif  // OPTSWEEP_CLI_HPP
