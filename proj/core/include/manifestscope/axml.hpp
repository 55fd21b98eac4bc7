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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manifestscope/errors.hpp"

namespace manifestscope {

// Namespace URI carried by android: attributes in compiled manifests.
inline constexpr std::string_view kAndroidNamespace =
    "http://schemas.android.com/apk/res/android";

// A decoded attribute value. The raw (data_type, data) pair from the binary
// format is always preserved; `kind` tells which interpretation applies.
// Unrecognized types map to Kind::Raw so no manifest fact is silently lost.
struct TypedValue {
  enum class Kind {
    String,     // 0x03
    Boolean,    // 0x12, raw data 0x00000000 or 0xFFFFFFFF only
    IntDec,     // 0x10
    IntHex,     // 0x11
    Reference,  // 0x01, 32-bit resource id preserved verbatim
    Float,      // 0x04
    IntFamily,  // 0x13..0x1f (enums, flags, colors)
    Raw,        // anything else
  };

  Kind kind = Kind::Raw;
  uint8_t data_type = 0;
  uint32_t data = 0;
  std::string str;  // set when kind == String

  bool as_bool() const { return data == 0xFFFFFFFFu; }
  int32_t as_int() const { return static_cast<int32_t>(data); }
  float as_float() const;

  // Human-readable form used by reports ("true", "1234", "@0x7f010001", ...).
  std::string display() const;
};

struct AxmlAttribute {
  std::optional<std::string> ns;  // namespace URI, already resolved
  std::string name;
  TypedValue value;
};

struct AxmlElement {
  std::optional<std::string> ns;
  std::string name;
  std::vector<AxmlAttribute> attributes;
  std::vector<AxmlElement> children;

  const AxmlAttribute* find_attr(std::optional<std::string_view> ns,
                                 std::string_view name) const;
};

struct AxmlDocument {
  AxmlElement root;
  std::vector<std::string> string_pool;
  std::vector<uint32_t> resource_map;
  std::vector<std::string> warnings;
};

// Decodes Android binary XML (compiled AndroidManifest.xml, res/xml/*).
// Throws AxmlError: NotBinaryXml when the leading chunk is not RES_XML_TYPE,
// MalformedChunk on any size/offset inconsistency or nesting violation,
// DanglingStringIndex when an element or attribute references a string
// outside the pool. Never reads past declared chunk sizes.
AxmlDocument decode_axml(std::span<const uint8_t> data);

// All elements matching the root-anchored name path, in document order.
std::vector<const AxmlElement*> find_elements(
    const AxmlDocument& doc, std::span<const std::string_view> path);

// Attribute lookup by (namespace URI, name); absent -> nullopt.
std::optional<TypedValue> get_attr(const AxmlElement& elem,
                                   std::optional<std::string_view> ns,
                                   std::string_view name);

}  // namespace manifestscope
