// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_SECTION_SIZE_HPP
#define OPTSWEEP_SECTION_SIZE_HPP

#include <cstdint>
#include <string>

namespace optsweep {

/// Size in bytes of the executable-code section of an object file or
/// executable: the sum of every ".text"/".text.*" section (ELF) or every
/// "__text*" section of the __TEXT segment (Mach-O). The container format
/// is detected by magic bytes; only section headers are read.
///
/// Throws MalformedBinary for unrecognized or truncated containers and
/// MissingTextSection when no code section is present.
std::uint64_t measure_code_size(const std::string& path);

}  // namespace optsweep

#endif  // OPTSWEEP_SECTION_SIZE_HPP
