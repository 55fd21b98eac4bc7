/*
 * Copyright (C) 2026 The ManifestScope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "manifestscope/dex.hpp"

#include <cctype>
#include <cstdio>

#include "bytes.hpp"

namespace manifestscope {

namespace {

constexpr size_t kHeaderSize = 0x70;
constexpr size_t kStringIdsSizeOff = 0x38;
constexpr size_t kStringIdsOffOff = 0x3C;

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD

[[noreturn]] void fail(DexError::Kind kind, const std::string& msg) {
  throw DexError(kind, msg);
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Modified UTF-8 payload (NUL-terminated) -> UTF-8. The encoding is CESU-8
// with U+0000 as 0xC0 0x80: sequences decode to UTF-16 code units first,
// surrogate pairs then combine into supplementary code points.
std::string decode_mutf8(detail::ByteReader& r, size_t pos, uint32_t expected_units,
                         uint32_t index, std::vector<std::string>& warnings) {
  std::vector<uint16_t> units;
  units.reserve(expected_units);
  for (;;) {
    uint8_t b = r.bytes_at(pos, 1)[0];
    ++pos;
    if (b == 0) break;
    if ((b & 0x80) == 0) {
      units.push_back(b);
    } else if ((b & 0xE0) == 0xC0) {
      uint8_t b1 = r.bytes_at(pos, 1)[0];
      ++pos;
      if ((b1 & 0xC0) != 0x80) {
        units.push_back(0xFFFD);
        warnings.push_back("string " + std::to_string(index) +
                           ": malformed 2-byte sequence");
        --pos;  // re-inspect the byte as a new sequence
        continue;
      }
      units.push_back(static_cast<uint16_t>(((b & 0x1F) << 6) | (b1 & 0x3F)));
    } else if ((b & 0xF0) == 0xE0) {
      uint8_t b1 = r.bytes_at(pos, 1)[0];
      uint8_t b2 = r.bytes_at(pos + 1, 1)[0];
      if ((b1 & 0xC0) != 0x80 || (b2 & 0xC0) != 0x80) {
        units.push_back(0xFFFD);
        warnings.push_back("string " + std::to_string(index) +
                           ": malformed 3-byte sequence");
        continue;
      }
      pos += 2;
      units.push_back(static_cast<uint16_t>(((b & 0x0F) << 12) |
                                            ((b1 & 0x3F) << 6) | (b2 & 0x3F)));
    } else {
      // 4-byte UTF-8 never appears in modified UTF-8.
      units.push_back(0xFFFD);
      char buf[8];
      std::snprintf(buf, sizeof(buf), "0x%02x", b);
      warnings.push_back("string " + std::to_string(index) + ": byte " + buf +
                         " invalid in modified UTF-8");
    }
  }
  if (units.size() != expected_units)
    warnings.push_back("string " + std::to_string(index) +
                       ": utf16 length mismatch (" +
                       std::to_string(units.size()) + " vs declared " +
                       std::to_string(expected_units) + ")");

  std::string out;
  out.reserve(units.size());
  for (size_t i = 0; i < units.size();) {
    uint16_t u = units[i++];
    if (u >= 0xD800 && u <= 0xDBFF && i < units.size() &&
        units[i] >= 0xDC00 && units[i] <= 0xDFFF) {
      uint32_t cp =
          0x10000 + ((static_cast<uint32_t>(u) - 0xD800) << 10) +
          (units[i] - 0xDC00);
      ++i;
      append_utf8(out, cp);
    } else if (u >= 0xD800 && u <= 0xDFFF) {
      out += kReplacement;
      warnings.push_back("string " + std::to_string(index) +
                         ": unpaired surrogate replaced");
    } else {
      append_utf8(out, u);
    }
  }
  return out;
}

uint32_t read_uleb128(detail::ByteReader& r, size_t& pos) {
  uint32_t result = 0;
  int shift = 0;
  for (int i = 0; i < 5; ++i) {
    uint8_t b = r.bytes_at(pos, 1)[0];
    ++pos;
    result |= static_cast<uint32_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) return result;
    shift += 7;
  }
  return result;  // over-long encodings saturate; caller length-checks anyway
}

bool valid_descriptor_interior(std::string_view interior) {
  if (interior.empty()) return false;
  for (char c : interior) {
    if (c == ';' || c == '(' || c == ')' || c == '[' ||
        static_cast<unsigned char>(c) <= 0x20)
      return false;
  }
  // Path segments must be non-empty (no leading//trailing separator).
  if (interior.front() == '/' || interior.back() == '/') return false;
  if (interior.find("//") != std::string_view::npos) return false;
  return true;
}

}  // namespace

DexStringTable scan_dex(std::span<const uint8_t> data, std::string dex_name) {
  detail::ByteReader r(data);
  DexStringTable table;
  table.dex_name = std::move(dex_name);

  // Magic: `dex\n0NN\0`.
  if (data.size() < 8 || data[0] != 'd' || data[1] != 'e' || data[2] != 'x' ||
      data[3] != '\n' || data[4] != '0' || !std::isdigit(data[5]) ||
      !std::isdigit(data[6]) || data[7] != 0)
    fail(DexError::Kind::NotADex, "bad DEX magic");
  table.version.assign(reinterpret_cast<const char*>(data.data() + 4), 3);
  if (table.version < "035" || table.version > "041")
    table.warnings.push_back("unknown DEX version " + table.version +
                             "; attempting best-effort parse");

  if (data.size() < kHeaderSize)
    fail(DexError::Kind::TruncatedDex, "header truncated");

  uint32_t string_ids_size = r.u32_at(kStringIdsSizeOff);
  uint32_t string_ids_off = r.u32_at(kStringIdsOffOff);
  if (string_ids_size > 0) {
    uint64_t ids_end =
        static_cast<uint64_t>(string_ids_off) + 4ull * string_ids_size;
    if (string_ids_off < kHeaderSize || ids_end > data.size())
      fail(DexError::Kind::TruncatedDex, "string_ids section out of bounds");
  }

  table.strings.reserve(string_ids_size);
  try {
    for (uint32_t i = 0; i < string_ids_size; ++i) {
      uint32_t off = r.u32_at(string_ids_off + 4ull * i);
      if (off >= data.size())
        fail(DexError::Kind::BadStringOffset,
             "string " + std::to_string(i) + " data offset " +
                 std::to_string(off) + " outside file");
      size_t pos = off;
      uint32_t utf16_len = read_uleb128(r, pos);
      table.strings.push_back(
          decode_mutf8(r, pos, utf16_len, i, table.warnings));
    }
  } catch (const detail::OutOfRange&) {
    fail(DexError::Kind::TruncatedDex, "string data runs past end of file");
  }
  return table;
}

std::set<std::string> collect_class_prefixes(const DexStringTable& table) {
  std::set<std::string> prefixes;
  for (const auto& s : table.strings) {
    if (s.size() < 3 || s.front() != 'L' || s.back() != ';') continue;
    std::string_view interior(s.data() + 1, s.size() - 2);
    if (!valid_descriptor_interior(interior)) continue;
    std::string dotted(interior);
    for (char& c : dotted)
      if (c == '/') c = '.';
    prefixes.insert(std::move(dotted));
  }
  return prefixes;
}

}  // namespace manifestscope
