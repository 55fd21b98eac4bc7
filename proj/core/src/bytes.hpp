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

#include <cstddef>
#include <cstdint>
#include <span>

namespace manifestscope::detail {

// Internal sentinel thrown on out-of-bounds reads; every module boundary
// converts it into its own typed error so callers only ever see those.
struct OutOfRange {};

// Bounds-checked little-endian cursor over an immutable byte buffer.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  size_t size() const { return data_.size(); }
  size_t pos() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

  void seek(size_t pos) {
    if (pos > data_.size()) throw OutOfRange{};
    pos_ = pos;
  }

  void skip(size_t n) {
    if (n > remaining()) throw OutOfRange{};
    pos_ += n;
  }

  uint8_t u8() {
    if (remaining() < 1) throw OutOfRange{};
    return data_[pos_++];
  }

  uint16_t u16() {
    if (remaining() < 2) throw OutOfRange{};
    uint16_t v = static_cast<uint16_t>(data_[pos_]) |
                 static_cast<uint16_t>(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  uint32_t u32() {
    if (remaining() < 4) throw OutOfRange{};
    uint32_t v = static_cast<uint32_t>(data_[pos_]) |
                 static_cast<uint32_t>(data_[pos_ + 1]) << 8 |
                 static_cast<uint32_t>(data_[pos_ + 2]) << 16 |
                 static_cast<uint32_t>(data_[pos_ + 3]) << 24;
    pos_ += 4;
    return v;
  }

  uint16_t u16_at(size_t off) const {
    if (off + 2 > data_.size()) throw OutOfRange{};
    return static_cast<uint16_t>(data_[off]) |
           static_cast<uint16_t>(data_[off + 1]) << 8;
  }

  uint32_t u32_at(size_t off) const {
    if (off + 4 > data_.size()) throw OutOfRange{};
    return static_cast<uint32_t>(data_[off]) |
           static_cast<uint32_t>(data_[off + 1]) << 8 |
           static_cast<uint32_t>(data_[off + 2]) << 16 |
           static_cast<uint32_t>(data_[off + 3]) << 24;
  }

  std::span<const uint8_t> bytes(size_t n) {
    if (n > remaining()) throw OutOfRange{};
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const uint8_t> bytes_at(size_t off, size_t n) const {
    if (off > data_.size() || n > data_.size() - off) throw OutOfRange{};
    return data_.subspan(off, n);
  }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace manifestscope::detail
