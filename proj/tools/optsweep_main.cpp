// SPDX-License-Identifier: Apache-2.0

#include "optsweep/cli.hpp"

int main(int argc, char** argv) { return optsweep::run_cli(argc, argv); }
