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

#include "manifestscope/apk.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <string_view>

#include "bytes.hpp"

namespace manifestscope {

namespace {

// Magic numbers, bit-exact per the ZIP format.
constexpr uint32_t kLocalHeaderSig = 0x04034b50;   // PK\x03\x04
constexpr uint32_t kCentralDirSig = 0x02014b50;    // PK\x01\x02
constexpr uint32_t kEocdSig = 0x06054b50;          // PK\x05\x06
constexpr uint32_t kZip64LocatorSig = 0x07064b50;  // PK\x06\x07

constexpr size_t kEocdMinSize = 22;
constexpr size_t kMaxCommentLen = 0xFFFF;

constexpr uint16_t kMethodStored = 0;
constexpr uint16_t kMethodDeflate = 8;

[[noreturn]] void fail(ZipError::Kind kind, const std::string& msg) {
  throw ZipError(kind, msg);
}

// Normalizes an archive path and enforces the catalog invariants: separators
// unified to '/', no absolute paths, no "." or ".." segments.
std::string normalize_entry_name(std::string_view raw) {
  std::string name(raw);
  std::replace(name.begin(), name.end(), '\\', '/');
  if (name.empty()) fail(ZipError::Kind::BadEntryName, "empty entry name");
  if (name.front() == '/')
    fail(ZipError::Kind::BadEntryName, "absolute entry name: " + name);

  size_t start = 0;
  while (start <= name.size()) {
    size_t end = name.find('/', start);
    if (end == std::string::npos) end = name.size();
    std::string_view seg(name.data() + start, end - start);
    if (seg == "." || seg == "..")
      fail(ZipError::Kind::BadEntryName,
           "entry name contains '" + std::string(seg) + "' segment: " + name);
    start = end + 1;
  }
  return name;
}

// Locates the end-of-central-directory record: last candidate whose comment
// length is consistent with the file tail.
size_t find_eocd(const detail::ByteReader& r) {
  if (r.size() < kEocdMinSize)
    fail(ZipError::Kind::NotAZip, "file too small for an archive");
  size_t scan_floor =
      r.size() >= kEocdMinSize + kMaxCommentLen ? r.size() - kEocdMinSize - kMaxCommentLen : 0;
  for (size_t pos = r.size() - kEocdMinSize;; --pos) {
    if (r.u32_at(pos) == kEocdSig) {
      size_t comment_len = r.u16_at(pos + 20);
      if (pos + kEocdMinSize + comment_len == r.size()) return pos;
    }
    if (pos == scan_floor) break;
  }
  fail(ZipError::Kind::NotAZip, "end-of-central-directory signature not found");
}

std::vector<uint8_t> inflate_raw(std::span<const uint8_t> in,
                                 uint32_t expected_size,
                                 const std::string& entry_name) {
  std::vector<uint8_t> out(expected_size);
  z_stream zs{};
  // Negative window bits: raw deflate stream, no zlib wrapper.
  if (inflateInit2(&zs, -15) != Z_OK)
    fail(ZipError::Kind::CorruptEntry, "inflate init failed: " + entry_name);
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  uint64_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected_size)
    fail(ZipError::Kind::CorruptEntry,
         "deflate stream corrupt or size mismatch: " + entry_name);
  return out;
}

}  // namespace

ApkArchive ApkArchive::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ZipError::Kind::NotAZip, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof())
    fail(ZipError::Kind::TruncatedArchive, "read failed: " + path.string());
  return from_bytes(std::move(bytes), path);
}

ApkArchive ApkArchive::from_bytes(std::vector<uint8_t> bytes,
                                  std::filesystem::path source_path) {
  ApkArchive archive;
  archive.source_path_ = std::move(source_path);
  archive.data_ =
      std::make_shared<const std::vector<uint8_t>>(std::move(bytes));
  archive.parse_central_directory();
  return archive;
}

void ApkArchive::parse_central_directory() {
  detail::ByteReader r{std::span<const uint8_t>(*data_)};
  try {
    size_t eocd = find_eocd(r);
    uint16_t disk_num = r.u16_at(eocd + 4);
    uint16_t cd_disk = r.u16_at(eocd + 6);
    uint16_t entries_on_disk = r.u16_at(eocd + 8);
    uint16_t entries_total = r.u16_at(eocd + 10);
    uint32_t cd_size = r.u32_at(eocd + 12);
    uint32_t cd_offset = r.u32_at(eocd + 16);

    if (disk_num != 0 || cd_disk != 0 || entries_on_disk != entries_total)
      fail(ZipError::Kind::UnsupportedArchiveFeature,
           "multi-disk archives are not supported");
    if (entries_total == 0xFFFF || cd_size == 0xFFFFFFFFu ||
        cd_offset == 0xFFFFFFFFu ||
        (eocd >= 20 && r.u32_at(eocd - 20) == kZip64LocatorSig))
      fail(ZipError::Kind::UnsupportedArchiveFeature,
           "ZIP64 archives are not supported");
    if (static_cast<uint64_t>(cd_offset) + cd_size > eocd)
      fail(ZipError::Kind::TruncatedArchive,
           "central directory extends past its end record");

    entries_.reserve(entries_total);
    size_t pos = cd_offset;
    for (uint16_t i = 0; i < entries_total; ++i) {
      if (r.u32_at(pos) != kCentralDirSig)
        fail(ZipError::Kind::TruncatedArchive,
             "central directory entry signature missing");
      uint16_t method = r.u16_at(pos + 10);
      uint32_t crc = r.u32_at(pos + 16);
      uint32_t csize = r.u32_at(pos + 20);
      uint32_t usize = r.u32_at(pos + 24);
      uint16_t name_len = r.u16_at(pos + 28);
      uint16_t extra_len = r.u16_at(pos + 30);
      uint16_t comment_len = r.u16_at(pos + 32);
      uint32_t local_off = r.u32_at(pos + 42);

      auto name_bytes = r.bytes_at(pos + 46, name_len);
      std::string name = normalize_entry_name(std::string_view(
          reinterpret_cast<const char*>(name_bytes.data()), name_bytes.size()));

      ZipEntry entry;
      entry.name = name;
      entry.crc32 = crc;
      entry.compressed_size = csize;
      entry.uncompressed_size = usize;
      entry.local_header_offset = local_off;
      switch (method) {
        case kMethodStored:
          entry.method = CompressionMethod::Stored;
          break;
        case kMethodDeflate:
          entry.method = CompressionMethod::Deflate;
          break;
        default:
          fail(ZipError::Kind::UnsupportedCompressionMethod,
               "unsupported compression method " + std::to_string(method) +
                   " for entry " + name);
      }
      if (local_off >= data_->size())
        fail(ZipError::Kind::TruncatedArchive,
             "local header offset out of bounds for entry " + name);

      if (!index_.emplace(entry.name, entries_.size()).second)
        fail(ZipError::Kind::BadEntryName, "duplicate entry name: " + name);
      entries_.push_back(std::move(entry));
      pos += 46 + static_cast<size_t>(name_len) + extra_len + comment_len;
    }
    if (pos != static_cast<size_t>(cd_offset) + cd_size)
      fail(ZipError::Kind::TruncatedArchive,
           "central directory size does not match its entries");
  } catch (const detail::OutOfRange&) {
    fail(ZipError::Kind::TruncatedArchive, "archive truncated");
  }
}

bool ApkArchive::contains(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

const ZipEntry* ApkArchive::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<uint8_t> ApkArchive::read(std::string_view name) const {
  const ZipEntry* entry = find(name);
  if (!entry)
    fail(ZipError::Kind::EntryNotFound,
         "entry not found: " + std::string(name));

  detail::ByteReader r{std::span<const uint8_t>(*data_)};
  std::vector<uint8_t> out;
  try {
    size_t lh = entry->local_header_offset;
    if (r.u32_at(lh) != kLocalHeaderSig)
      fail(ZipError::Kind::CorruptEntry,
           "local header signature missing: " + entry->name);
    // Name/extra lengths in the local header may differ from the central
    // directory (extra fields often do); sizes and CRC from the central
    // directory stay authoritative.
    uint16_t name_len = r.u16_at(lh + 26);
    uint16_t extra_len = r.u16_at(lh + 28);
    size_t data_off = lh + 30 + name_len + extra_len;
    auto payload = r.bytes_at(data_off, entry->compressed_size);

    switch (entry->method) {
      case CompressionMethod::Stored:
        if (entry->compressed_size != entry->uncompressed_size)
          fail(ZipError::Kind::CorruptEntry,
               "stored entry size mismatch: " + entry->name);
        out.assign(payload.begin(), payload.end());
        break;
      case CompressionMethod::Deflate:
        out = inflate_raw(payload, entry->uncompressed_size, entry->name);
        break;
    }
  } catch (const detail::OutOfRange&) {
    fail(ZipError::Kind::CorruptEntry,
         "entry data out of bounds: " + entry->name);
  }

  uint32_t actual_crc = static_cast<uint32_t>(
      ::crc32(0L, out.empty() ? Z_NULL : out.data(),
              static_cast<uInt>(out.size())));
  if (actual_crc != entry->crc32)
    fail(ZipError::Kind::CorruptEntry, "CRC mismatch: " + entry->name);
  return out;
}

}  // namespace manifestscope
