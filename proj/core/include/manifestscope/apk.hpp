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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "manifestscope/errors.hpp"

namespace manifestscope {

enum class CompressionMethod {
  Stored,
  Deflate,
};

struct ZipEntry {
  std::string name;  // normalized archive-relative path
  uint32_t compressed_size = 0;
  uint32_t uncompressed_size = 0;
  CompressionMethod method = CompressionMethod::Stored;
  uint32_t crc32 = 0;
  uint32_t local_header_offset = 0;
};

// Read-only view of an APK (classic ZIP) container. The catalog is parsed
// from the central directory at open time; entry bodies are decompressed
// lazily by read(). Immutable after open, so concurrent reads are safe.
//
// ZIP64, multi-disk archives and compression methods other than stored or
// deflate are rejected. CRC32 is verified on every read.
class ApkArchive {
 public:
  static ApkArchive open(const std::filesystem::path& path);

  // Parses an archive from an in-memory image (fixtures, fuzzing).
  static ApkArchive from_bytes(std::vector<uint8_t> bytes,
                               std::filesystem::path source_path = {});

  const std::filesystem::path& source_path() const { return source_path_; }
  const std::vector<ZipEntry>& entries() const { return entries_; }

  bool contains(std::string_view name) const;
  const ZipEntry* find(std::string_view name) const;

  // Returns the fully decompressed entry body. Throws ZipError with kind
  // EntryNotFound or CorruptEntry (inflate failure, size or CRC mismatch).
  std::vector<uint8_t> read(std::string_view name) const;

 private:
  ApkArchive() = default;
  void parse_central_directory();

  std::filesystem::path source_path_;
  std::shared_ptr<const std::vector<uint8_t>> data_;
  std::vector<ZipEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace manifestscope
