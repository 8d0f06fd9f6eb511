// SPDX-License-Identifier: Apache-2.0

#include "optsweep/section_size.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "optsweep/errors.hpp"

namespace optsweep {

namespace {

struct Reader {
  std::string bytes;
  bool swap = false;  // container endianness differs from the host's

  std::uint16_t u16(size_t off) const {
    check(off, 2);
    std::uint16_t v;
    std::memcpy(&v, bytes.data() + off, 2);
    return swap ? static_cast<std::uint16_t>((v >> 8) | (v << 8)) : v;
  }
  std::uint32_t u32(size_t off) const {
    check(off, 4);
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + off, 4);
    return swap ? __builtin_bswap32(v) : v;
  }
  std::uint64_t u64(size_t off) const {
    check(off, 8);
    std::uint64_t v;
    std::memcpy(&v, bytes.data() + off, 8);
    return swap ? __builtin_bswap64(v) : v;
  }
  std::string cstr(size_t off, size_t max) const {
    check(off, 1);
    size_t end = off;
    while (end < bytes.size() && end - off < max && bytes[end] != '\0') ++end;
    return bytes.substr(off, end - off);
  }
  void check(size_t off, size_t n) const {
    if (off + n > bytes.size()) {
      throw MalformedBinary("truncated binary: read past end of file");
    }
  }
};

bool is_text_name(const std::string& name) {
  return name == ".text" || name.rfind(".text.", 0) == 0;
}

std::uint64_t elf_text_size(const Reader& r) {
  // e_ident: class at 4, data (endianness) at 5
  const unsigned char cls = static_cast<unsigned char>(r.bytes[4]);
  const unsigned char data = static_cast<unsigned char>(r.bytes[5]);
  if (cls != 1 && cls != 2) throw MalformedBinary("bad ELF class");
  if (data != 1 && data != 2) throw MalformedBinary("bad ELF data encoding");
  Reader er = r;
  const bool file_be = data == 2;
  const std::uint16_t probe = 1;
  const bool host_le = *reinterpret_cast<const char*>(&probe) == 1;
  er.swap = file_be == host_le;

  const bool is64 = cls == 2;
  std::uint64_t shoff = is64 ? er.u64(0x28) : er.u32(0x20);
  std::uint16_t shentsize = er.u16(is64 ? 0x3a : 0x2e);
  std::uint64_t shnum = er.u16(is64 ? 0x3c : 0x30);
  std::uint64_t shstrndx = er.u16(is64 ? 0x3e : 0x32);
  if (shoff == 0) throw MalformedBinary("ELF has no section header table");
  if (shentsize < (is64 ? 64u : 40u)) {
    throw MalformedBinary("bad ELF section header entry size");
  }

  auto sh_field_u32 = [&](std::uint64_t idx, size_t off) {
    return er.u32(shoff + idx * shentsize + off);
  };
  auto sh_field_sz = [&](std::uint64_t idx, size_t off32, size_t off64) {
    return is64 ? er.u64(shoff + idx * shentsize + off64)
                : static_cast<std::uint64_t>(
                      er.u32(shoff + idx * shentsize + off32));
  };

  // extended numbering: real counts live in section header 0
  if (shnum == 0) shnum = sh_field_sz(0, 0x14, 0x20);
  if (shstrndx == 0xffff /*SHN_XINDEX*/) shstrndx = sh_field_u32(0, 0x18);
  if (shstrndx >= shnum) throw MalformedBinary("bad ELF string table index");

  std::uint64_t str_off = sh_field_sz(shstrndx, 0x10, 0x18);
  std::uint64_t str_size = sh_field_sz(shstrndx, 0x14, 0x20);

  std::uint64_t total = 0;
  bool found = false;
  for (std::uint64_t i = 0; i < shnum; ++i) {
    std::uint32_t name_off = sh_field_u32(i, 0);
    if (name_off >= str_size) continue;
    std::string name = er.cstr(str_off + name_off, str_size - name_off);
    if (!is_text_name(name)) continue;
    std::uint32_t type = sh_field_u32(i, 4);
    if (type == 8 /*SHT_NOBITS*/) continue;
    total += sh_field_sz(i, 0x14, 0x20);
    found = true;
  }
  if (!found) throw MissingTextSection("no .text section in ELF file");
  return total;
}

std::uint64_t macho_text_size(const Reader& r, bool is64, bool swapped) {
  Reader mr = r;
  mr.swap = swapped;
  const size_t header_size = is64 ? 32 : 28;
  std::uint32_t ncmds = mr.u32(16);

  std::uint64_t total = 0;
  bool found = false;
  size_t off = header_size;
  for (std::uint32_t c = 0; c < ncmds; ++c) {
    std::uint32_t cmd = mr.u32(off);
    std::uint32_t cmdsize = mr.u32(off + 4);
    if (cmdsize < 8) throw MalformedBinary("bad Mach-O load command size");
    const bool seg64 = cmd == 0x19;  // LC_SEGMENT_64
    const bool seg32 = cmd == 0x1;   // LC_SEGMENT
    if (seg64 || seg32) {
      std::uint32_t nsects = mr.u32(off + (seg64 ? 64 : 48));
      size_t sect_off = off + (seg64 ? 72 : 56);
      const size_t sect_size = seg64 ? 80 : 68;
      for (std::uint32_t s = 0; s < nsects; ++s) {
        std::string sectname = mr.cstr(sect_off, 16);
        std::string segname = mr.cstr(sect_off + 16, 16);
        if (segname == "__TEXT" && sectname.rfind("__text", 0) == 0) {
          total += seg64 ? mr.u64(sect_off + 40)
                         : static_cast<std::uint64_t>(mr.u32(sect_off + 36));
          found = true;
        }
        sect_off += sect_size;
      }
    }
    off += cmdsize;
  }
  if (!found) throw MissingTextSection("no __TEXT,__text section in Mach-O file");
  return total;
}

}  // namespace

std::uint64_t measure_code_size(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedBinary("cannot open " + path);
  Reader r;
  {
    std::ostringstream ss;
    ss << in.rdbuf();
    r.bytes = ss.str();
  }
  if (r.bytes.size() < 4) throw MalformedBinary("file too small: " + path);

  std::uint32_t magic;
  std::memcpy(&magic, r.bytes.data(), 4);

  if (r.bytes.size() >= 4 && r.bytes[0] == 0x7f && r.bytes[1] == 'E' &&
      r.bytes[2] == 'L' && r.bytes[3] == 'F') {
    if (r.bytes.size() < 64) throw MalformedBinary("truncated ELF header");
    return elf_text_size(r);
  }
  switch (magic) {
    case 0xfeedfacf: return macho_text_size(r, true, false);
    case 0xcffaedfe: return macho_text_size(r, true, true);
    case 0xfeedface: return macho_text_size(r, false, false);
    case 0xcefaedfe: return macho_text_size(r, false, true);
    case 0xcafebabe: case 0xbebafeca:
      throw MalformedBinary("fat/universal Mach-O binaries are not supported");
    default:
      throw MalformedBinary("unrecognized binary container: " + path);
  }
}

}  // namespace optsweep
