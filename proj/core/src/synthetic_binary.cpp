// SPDX-License-Identifier: Apache-2.0

#include "optsweep/synthetic_binary.hpp"

#include <cstring>
#include <fstream>

#include "optsweep/errors.hpp"

namespace optsweep {

namespace {

void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_bytes(std::string& b, const char* data, size_t n) {
  b.append(data, n);
}
void pad_to(std::string& b, size_t off) {
  if (b.size() < off) b.append(off - b.size(), '\0');
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

void write_minimal_elf(const std::string& path,
                       const std::vector<std::uint64_t>& text_sizes) {
  const size_t nsec = text_sizes.size();

  std::vector<std::string> names;
  names.emplace_back(".text");
  for (size_t i = 1; i < nsec; ++i) names.push_back(".text." + std::to_string(i));

  // string table: \0 name1\0 name2\0 ... .shstrtab\0
  std::string shstrtab(1, '\0');
  std::vector<std::uint32_t> name_off;
  for (const auto& n : names) {
    name_off.push_back(static_cast<std::uint32_t>(shstrtab.size()));
    shstrtab += n;
    shstrtab.push_back('\0');
  }
  std::uint32_t shstrtab_name_off = static_cast<std::uint32_t>(shstrtab.size());
  shstrtab += ".shstrtab";
  shstrtab.push_back('\0');

  std::string out;
  // ELF header
  const char ident[16] = {0x7f, 'E', 'L', 'F', 2 /*64-bit*/, 1 /*LE*/,
                          1 /*version*/, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  put_bytes(out, ident, 16);
  put_u16(out, 1);   // ET_REL
  put_u16(out, 62);  // EM_X86_64
  put_u32(out, 1);   // EV_CURRENT
  put_u64(out, 0);   // e_entry
  put_u64(out, 0);   // e_phoff
  size_t shoff_field = out.size();
  put_u64(out, 0);   // e_shoff, patched below
  put_u32(out, 0);   // e_flags
  put_u16(out, 64);  // e_ehsize
  put_u16(out, 0);   // e_phentsize
  put_u16(out, 0);   // e_phnum
  put_u16(out, 64);  // e_shentsize
  put_u16(out, static_cast<std::uint16_t>(nsec + 2));  // e_shnum
  put_u16(out, static_cast<std::uint16_t>(nsec + 1));  // e_shstrndx

  // section data
  std::vector<std::uint64_t> sec_off;
  for (size_t i = 0; i < nsec; ++i) {
    sec_off.push_back(out.size());
    // deterministic filler so identical inputs give identical files
    for (std::uint64_t j = 0; j < text_sizes[i]; ++j) {
      out.push_back(static_cast<char>(0x90));  // x86 nop
    }
  }
  std::uint64_t str_off = out.size();
  out += shstrtab;

  pad_to(out, (out.size() + 7) & ~size_t{7});
  std::uint64_t shoff = out.size();

  auto shdr = [&](std::uint32_t name, std::uint32_t type, std::uint64_t flags,
                  std::uint64_t off, std::uint64_t size) {
    put_u32(out, name);
    put_u32(out, type);
    put_u64(out, flags);
    put_u64(out, 0);  // sh_addr
    put_u64(out, off);
    put_u64(out, size);
    put_u32(out, 0);  // sh_link
    put_u32(out, 0);  // sh_info
    put_u64(out, 1);  // sh_addralign
    put_u64(out, 0);  // sh_entsize
  };
  shdr(0, 0, 0, 0, 0);  // SHN_UNDEF
  for (size_t i = 0; i < nsec; ++i) {
    shdr(name_off[i], 1 /*SHT_PROGBITS*/, 0x2 | 0x4 /*ALLOC|EXECINSTR*/,
         sec_off[i], text_sizes[i]);
  }
  shdr(shstrtab_name_off, 3 /*SHT_STRTAB*/, 0, str_off, shstrtab.size());

  // patch e_shoff
  for (int i = 0; i < 8; ++i) {
    out[shoff_field + i] = static_cast<char>((shoff >> (8 * i)) & 0xff);
  }
  write_file(path, out);
}

void write_minimal_macho(const std::string& path,
                         const std::vector<std::uint32_t>& text_sizes) {
  const std::uint32_t nsec = static_cast<std::uint32_t>(text_sizes.size());
  const std::uint32_t cmdsize = 72 + nsec * 80;
  const std::uint32_t data_start = 32 + cmdsize;

  std::string out;
  put_u32(out, 0xfeedfacf);  // MH_MAGIC_64
  put_u32(out, 0x01000007);  // CPU_TYPE_X86_64
  put_u32(out, 3);           // CPU_SUBTYPE_X86_64_ALL
  put_u32(out, 1);           // MH_OBJECT
  put_u32(out, 1);           // ncmds
  put_u32(out, cmdsize);
  put_u32(out, 0);           // flags
  put_u32(out, 0);           // reserved

  std::uint64_t total = 0;
  for (auto s : text_sizes) total += s;

  put_u32(out, 0x19);  // LC_SEGMENT_64
  put_u32(out, cmdsize);
  char segname[16] = {0};  // unnamed segment in MH_OBJECT files
  put_bytes(out, segname, 16);
  put_u64(out, 0);           // vmaddr
  put_u64(out, total);       // vmsize
  put_u64(out, data_start);  // fileoff
  put_u64(out, total);       // filesize
  put_u32(out, 7);           // maxprot
  put_u32(out, 5);           // initprot
  put_u32(out, nsec);
  put_u32(out, 0);  // segment flags

  std::uint32_t off = data_start;
  std::uint64_t addr = 0;
  for (std::uint32_t i = 0; i < nsec; ++i) {
    char sectname[16] = {0};
    std::string n = i == 0 ? "__text" : "__text" + std::to_string(i);
    std::memcpy(sectname, n.data(), std::min<size_t>(n.size(), 16));
    char seg[16] = {0};
    std::memcpy(seg, "__TEXT", 6);
    put_bytes(out, sectname, 16);
    put_bytes(out, seg, 16);
    put_u64(out, addr);
    put_u64(out, text_sizes[i]);
    put_u32(out, off);
    put_u32(out, 0);  // align 2^0
    put_u32(out, 0);  // reloff
    put_u32(out, 0);  // nreloc
    put_u32(out, 0x80000400);  // pure + some instructions
    put_u32(out, 0);
    put_u32(out, 0);
    put_u32(out, 0);
    off += text_sizes[i];
    addr += text_sizes[i];
  }
  for (std::uint32_t i = 0; i < nsec; ++i) {
    out.append(text_sizes[i], '\x90');
  }
  write_file(path, out);
}

}  // namespace optsweep
