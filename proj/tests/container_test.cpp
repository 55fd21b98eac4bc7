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

#include <doctest.h>

#include "manifestscope/apk.hpp"
#include "test_support.hpp"

using namespace manifestscope;
using mstest::fixture;

namespace {

std::vector<uint8_t> b64_decode(const std::string& text) {
  static const std::string alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::vector<uint8_t> out;
  int acc = 0, bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n') continue;
    acc = (acc << 6) | static_cast<int>(alphabet.find(c));
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

ZipError::Kind open_error(const std::string& rel) {
  try {
    ApkArchive::open(fixture(rel));
  } catch (const ZipError& e) {
    return e.kind();
  }
  FAIL("expected ZipError opening " << rel);
  return ZipError::Kind::NotAZip;
}

}  // namespace

TEST_SUITE_BEGIN("container");

// Catalog and contents must match what the scripted archiver wrote
// (zip/basic3.expected.json is frozen from the archiver's own listing).
TEST_CASE("fixture archive catalog matches the archiver listing") {
  ApkArchive archive = ApkArchive::open(fixture("zip/basic3.zip"));
  auto expected = mstest::read_json(fixture("zip/basic3.expected.json"));
  const auto& entries = expected.at("entries");
  REQUIRE(archive.entries().size() == entries.size());

  for (const auto& exp : entries) {
    const ZipEntry* entry = archive.find(exp.at("name").get<std::string>());
    REQUIRE(entry != nullptr);
    CHECK(entry->compressed_size == exp.at("compressed_size").get<uint32_t>());
    CHECK(entry->uncompressed_size ==
          exp.at("uncompressed_size").get<uint32_t>());
    CHECK(entry->crc32 == exp.at("crc32").get<uint32_t>());
    bool stored = exp.at("method").get<std::string>() == "stored";
    CHECK((entry->method == CompressionMethod::Stored) == stored);
  }
}

TEST_CASE("read_entry round-trips every pre-archival byte") {
  ApkArchive archive = ApkArchive::open(fixture("zip/basic3.zip"));
  auto expected = mstest::read_json(fixture("zip/basic3.expected.json"));
  for (const auto& exp : expected.at("entries")) {
    auto name = exp.at("name").get<std::string>();
    auto bytes = archive.read(name);
    auto original = b64_decode(exp.at("content_b64").get<std::string>());
    CHECK_MESSAGE(bytes == original, "entry ", name);
    CHECK(bytes.size() == archive.find(name)->uncompressed_size);
  }
}

TEST_CASE("listing is stable across opens") {
  ApkArchive a = ApkArchive::open(fixture("zip/basic3.zip"));
  ApkArchive b = ApkArchive::open(fixture("zip/basic3.zip"));
  REQUIRE(a.entries().size() == b.entries().size());
  for (size_t i = 0; i < a.entries().size(); ++i) {
    CHECK(a.entries()[i].name == b.entries()[i].name);
    CHECK(a.entries()[i].crc32 == b.entries()[i].crc32);
  }
}

TEST_CASE("empty archive has an empty entry list") {
  ApkArchive archive = ApkArchive::open(fixture("zip/empty.zip"));
  CHECK(archive.entries().empty());
}

TEST_CASE("random bytes are not a zip") {
  CHECK(open_error("zip/random_bytes.bin") == ZipError::Kind::NotAZip);
}

TEST_CASE("missing entry reports EntryNotFound") {
  ApkArchive archive = ApkArchive::open(fixture("zip/basic3.zip"));
  CHECK_THROWS_AS((void)archive.read("missing.bin"), ZipError);
  try {
    (void)archive.read("missing.bin");
  } catch (const ZipError& e) {
    CHECK(e.kind() == ZipError::Kind::EntryNotFound);
  }
}

TEST_CASE("corrupted deflate stream reports CorruptEntry") {
  auto expected = mstest::read_json(fixture("zip/corrupt_deflate.expected.json"));
  ApkArchive archive = ApkArchive::open(fixture("zip/corrupt_deflate.zip"));
  try {
    (void)archive.read(expected.at("corrupt_entry").get<std::string>());
    FAIL("expected CorruptEntry");
  } catch (const ZipError& e) {
    CHECK(e.kind() == ZipError::Kind::CorruptEntry);
  }
  // Other entries stay readable.
  CHECK_NOTHROW(
      (void)archive.read(expected.at("intact_entry").get<std::string>()));
}

TEST_CASE("central directory outside the file reports TruncatedArchive") {
  CHECK(open_error("zip/truncated_eocd.zip") ==
        ZipError::Kind::TruncatedArchive);
}

TEST_CASE("zip64 marker is rejected as unsupported") {
  CHECK(open_error("zip/zip64_marker.zip") ==
        ZipError::Kind::UnsupportedArchiveFeature);
}

TEST_CASE("bzip2 entries are rejected at open") {
  CHECK(open_error("zip/bzip2_method.zip") ==
        ZipError::Kind::UnsupportedCompressionMethod);
}

TEST_CASE("entry names with dot-dot segments are rejected") {
  CHECK(open_error("zip/badname.zip") == ZipError::Kind::BadEntryName);
}

TEST_CASE("duplicate entry names are rejected") {
  CHECK(open_error("zip/dupname.zip") == ZipError::Kind::BadEntryName);
}

TEST_CASE("unreadable path reports NotAZip") {
  CHECK_THROWS_AS(ApkArchive::open(fixture("zip/does_not_exist.zip")),
                  ZipError);
}

TEST_SUITE_END();
