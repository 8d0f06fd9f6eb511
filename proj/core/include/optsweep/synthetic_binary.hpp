// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_SYNTHETIC_BINARY_HPP
#define OPTSWEEP_SYNTHETIC_BINARY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace optsweep {

/// Writes a minimal ELF64 relocatable with one executable-code section per
/// entry in `text_sizes` (".text", then ".text.1", ".text.2", ...), each
/// filled with `text_sizes[i]` bytes. Used for mock build artifacts and
/// for code-size fixtures with known section sizes.
void write_minimal_elf(const std::string& path,
                       const std::vector<std::uint64_t>& text_sizes);

/// Same idea for the Mach-O container: a 64-bit object with one __TEXT
/// segment holding a "__text" section per entry.
void write_minimal_macho(const std::string& path,
                         const std::vector<std::uint32_t>& text_sizes);

}  // namespace optsweep

#endif  // OPTSWEEP_SYNTHETIC_BINARY_HPP
