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

#include "manifestscope/axml.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>

#include "bytes.hpp"

namespace manifestscope {

namespace {

// Chunk types as emitted by the platform asset compiler.
constexpr uint16_t kResXml = 0x0003;
constexpr uint16_t kResStringPool = 0x0001;
constexpr uint16_t kResXmlResourceMap = 0x0180;
constexpr uint16_t kResXmlStartNamespace = 0x0100;
constexpr uint16_t kResXmlEndNamespace = 0x0101;
constexpr uint16_t kResXmlStartElement = 0x0102;
constexpr uint16_t kResXmlEndElement = 0x0103;
constexpr uint16_t kResXmlCdata = 0x0104;

constexpr uint32_t kUtf8PoolFlag = 1u << 8;
constexpr uint32_t kNoIndex = 0xFFFFFFFFu;

// Attribute value data types.
constexpr uint8_t kTypeReference = 0x01;
constexpr uint8_t kTypeString = 0x03;
constexpr uint8_t kTypeFloat = 0x04;
constexpr uint8_t kTypeIntDec = 0x10;
constexpr uint8_t kTypeIntHex = 0x11;
constexpr uint8_t kTypeBoolean = 0x12;
constexpr uint8_t kTypeIntFamilyEnd = 0x1f;

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD

[[noreturn]] void fail(AxmlError::Kind kind, const std::string& msg) {
  throw AxmlError(kind, msg);
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

// UTF-16LE code units -> UTF-8, combining surrogate pairs. Unpaired
// surrogates become U+FFFD with a warning.
std::string utf16_to_utf8(std::span<const uint8_t> units, bool* malformed) {
  std::string out;
  out.reserve(units.size() / 2);
  size_t i = 0;
  while (i + 2 <= units.size()) {
    uint16_t u = static_cast<uint16_t>(units[i]) |
                 static_cast<uint16_t>(units[i + 1]) << 8;
    i += 2;
    if (u >= 0xD800 && u <= 0xDBFF) {
      if (i + 2 <= units.size()) {
        uint16_t lo = static_cast<uint16_t>(units[i]) |
                      static_cast<uint16_t>(units[i + 1]) << 8;
        if (lo >= 0xDC00 && lo <= 0xDFFF) {
          i += 2;
          uint32_t cp = 0x10000 + ((static_cast<uint32_t>(u) - 0xD800) << 10) +
                        (lo - 0xDC00);
          append_utf8(out, cp);
          continue;
        }
      }
      out += kReplacement;
      *malformed = true;
    } else if (u >= 0xDC00 && u <= 0xDFFF) {
      out += kReplacement;
      *malformed = true;
    } else {
      append_utf8(out, u);
    }
  }
  return out;
}

struct StringPool {
  std::vector<std::string> strings;
};

// Parses one string pool chunk located at [chunk, chunk + chunk_size) inside
// the reader. Malformed entries decode to U+FFFD with a warning instead of
// aborting the document.
StringPool parse_string_pool(const detail::ByteReader& r, size_t chunk,
                             uint32_t chunk_size, uint16_t header_size,
                             std::vector<std::string>& warnings) {
  if (header_size < 28 || header_size > chunk_size)
    fail(AxmlError::Kind::MalformedChunk, "string pool header too small");
  uint32_t string_count = r.u32_at(chunk + 8);
  uint32_t flags = r.u32_at(chunk + 16);
  uint32_t strings_start = r.u32_at(chunk + 20);
  const bool utf8 = (flags & kUtf8PoolFlag) != 0;
  const size_t chunk_end = chunk + chunk_size;

  // Offset array must fit inside the chunk.
  if (static_cast<uint64_t>(header_size) + 4ull * string_count > chunk_size)
    fail(AxmlError::Kind::MalformedChunk,
         "string pool offset array exceeds chunk");
  if (string_count > 0 &&
      (strings_start < header_size || chunk + strings_start > chunk_end))
    fail(AxmlError::Kind::MalformedChunk, "string data start out of chunk");

  StringPool pool;
  pool.strings.reserve(string_count);
  for (uint32_t i = 0; i < string_count; ++i) {
    uint32_t rel = r.u32_at(chunk + header_size + 4ull * i);
    size_t pos = chunk + strings_start + rel;
    bool bad = false;
    std::string decoded;
    if (pos >= chunk_end) {
      bad = true;
    } else if (utf8) {
      // Two varlen lengths: UTF-16 char count (ignored) then byte count.
      auto varlen8 = [&](size_t& p) -> int64_t {
        if (p >= chunk_end) return -1;
        uint8_t b0 = r.bytes_at(p, 1)[0];
        p += 1;
        if ((b0 & 0x80) == 0) return b0;
        if (p >= chunk_end) return -1;
        uint8_t b1 = r.bytes_at(p, 1)[0];
        p += 1;
        return (static_cast<int64_t>(b0 & 0x7F) << 8) | b1;
      };
      size_t p = pos;
      int64_t char_len = varlen8(p);
      int64_t byte_len = char_len < 0 ? -1 : varlen8(p);
      if (byte_len < 0 || p + byte_len > chunk_end) {
        bad = true;
      } else {
        auto data = r.bytes_at(p, static_cast<size_t>(byte_len));
        decoded.assign(reinterpret_cast<const char*>(data.data()),
                       data.size());
      }
    } else {
      if (pos + 2 > chunk_end) {
        bad = true;
      } else {
        uint64_t len = r.u16_at(pos);
        size_t p = pos + 2;
        if (len & 0x8000) {
          if (p + 2 > chunk_end) {
            bad = true;
          } else {
            len = ((len & 0x7FFF) << 16) | r.u16_at(p);
            p += 2;
          }
        }
        if (!bad) {
          if (p + 2 * len > chunk_end) {
            bad = true;
          } else {
            bool malformed = false;
            decoded = utf16_to_utf8(r.bytes_at(p, 2 * len), &malformed);
            if (malformed)
              warnings.push_back("string pool entry " + std::to_string(i) +
                                 ": unpaired surrogate replaced");
          }
        }
      }
    }
    if (bad) {
      warnings.push_back("string pool entry " + std::to_string(i) +
                         " malformed; replaced");
      decoded = kReplacement;
    }
    pool.strings.push_back(std::move(decoded));
  }
  return pool;
}

class Decoder {
 public:
  explicit Decoder(std::span<const uint8_t> data) : r_(data) {}

  AxmlDocument run() {
    if (r_.size() < 8 || r_.u16_at(0) != kResXml)
      fail(AxmlError::Kind::NotBinaryXml,
           "data does not start with a binary XML chunk");
    uint16_t header_size = r_.u16_at(2);
    uint32_t declared = r_.u32_at(4);
    if (header_size < 8 || header_size > r_.size())
      fail(AxmlError::Kind::MalformedChunk, "bad document header size");
    if (declared < header_size || declared > r_.size())
      fail(AxmlError::Kind::MalformedChunk,
           "document size field inconsistent with data");

    size_t pos = header_size;
    while (pos < declared) {
      if (declared - pos < 8)
        fail(AxmlError::Kind::MalformedChunk, "trailing bytes under chunk size");
      uint16_t type = r_.u16_at(pos);
      uint16_t chsize = r_.u16_at(pos + 2);
      uint32_t size = r_.u32_at(pos + 4);
      if (size < 8 || size < chsize || size > declared - pos)
        fail(AxmlError::Kind::MalformedChunk,
             "chunk size inconsistent at offset " + std::to_string(pos));

      switch (type) {
        case kResStringPool: {
          auto pool = parse_string_pool(r_, pos, size, chsize, doc_.warnings);
          doc_.string_pool = std::move(pool.strings);
          break;
        }
        case kResXmlResourceMap: {
          if (chsize < 8 || (size - chsize) % 4 != 0)
            fail(AxmlError::Kind::MalformedChunk, "resource map missized");
          size_t count = (size - chsize) / 4;
          doc_.resource_map.reserve(count);
          for (size_t i = 0; i < count; ++i)
            doc_.resource_map.push_back(r_.u32_at(pos + chsize + 4 * i));
          break;
        }
        case kResXmlStartNamespace:
          require_node_header(chsize, size, 8);
          ++namespace_depth_;
          break;
        case kResXmlEndNamespace:
          require_node_header(chsize, size, 8);
          if (namespace_depth_ == 0)
            fail(AxmlError::Kind::MalformedChunk,
                 "namespace end without matching start");
          --namespace_depth_;
          break;
        case kResXmlStartElement:
          handle_start_element(pos, chsize, size);
          break;
        case kResXmlEndElement:
          handle_end_element(pos, chsize, size);
          break;
        case kResXmlCdata:
          // Character data never carries manifest facts; skipped.
          require_node_header(chsize, size, 12);
          break;
        default: {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "unknown chunk type 0x%04x skipped",
                        type);
          doc_.warnings.emplace_back(buf);
          break;
        }
      }
      pos += size;
    }

    if (!stack_.empty())
      fail(AxmlError::Kind::MalformedChunk, "unclosed element at end of data");
    if (!root_seen_)
      fail(AxmlError::Kind::MalformedChunk, "document has no root element");
    return std::move(doc_);
  }

 private:
  void require_node_header(uint16_t chsize, uint32_t size, uint32_t payload) {
    // Node chunks carry line number + comment in a 16-byte header.
    if (chsize < 16 || size < static_cast<uint32_t>(chsize) + payload)
      fail(AxmlError::Kind::MalformedChunk, "node chunk too small");
  }

  std::string pool_string(uint32_t index, const char* what) {
    if (index >= doc_.string_pool.size())
      fail(AxmlError::Kind::DanglingStringIndex,
           std::string(what) + " string index " + std::to_string(index) +
               " outside pool of " + std::to_string(doc_.string_pool.size()));
    return doc_.string_pool[index];
  }

  std::optional<std::string> optional_pool_string(uint32_t index,
                                                  const char* what) {
    if (index == kNoIndex) return std::nullopt;
    return pool_string(index, what);
  }

  TypedValue decode_value(uint8_t data_type, uint32_t data) {
    TypedValue v;
    v.data_type = data_type;
    v.data = data;
    switch (data_type) {
      case kTypeString:
        v.kind = TypedValue::Kind::String;
        v.str = pool_string(data, "attribute value");
        break;
      case kTypeBoolean:
        if (data == 0 || data == 0xFFFFFFFFu) {
          v.kind = TypedValue::Kind::Boolean;
        } else {
          v.kind = TypedValue::Kind::Raw;
          doc_.warnings.push_back(
              "boolean attribute with non-canonical payload " +
              std::to_string(data) + " kept raw");
        }
        break;
      case kTypeIntDec:
        v.kind = TypedValue::Kind::IntDec;
        break;
      case kTypeIntHex:
        v.kind = TypedValue::Kind::IntHex;
        break;
      case kTypeReference:
        v.kind = TypedValue::Kind::Reference;
        break;
      case kTypeFloat:
        v.kind = TypedValue::Kind::Float;
        break;
      default:
        v.kind = (data_type > kTypeBoolean && data_type <= kTypeIntFamilyEnd)
                     ? TypedValue::Kind::IntFamily
                     : TypedValue::Kind::Raw;
        break;
    }
    return v;
  }

  void handle_start_element(size_t pos, uint16_t chsize, uint32_t size) {
    require_node_header(chsize, size, 20);
    size_t ext = pos + chsize;
    uint32_t ns = r_.u32_at(ext);
    uint32_t name = r_.u32_at(ext + 4);
    uint16_t attr_start = r_.u16_at(ext + 8);
    uint16_t attr_size = r_.u16_at(ext + 10);
    uint16_t attr_count = r_.u16_at(ext + 12);

    if (root_seen_ && stack_.empty())
      fail(AxmlError::Kind::MalformedChunk,
           "second root element; document must have a single root");

    AxmlElement elem;
    elem.ns = optional_pool_string(ns, "element namespace");
    elem.name = pool_string(name, "element name");

    if (attr_size < 20)
      fail(AxmlError::Kind::MalformedChunk, "attribute record undersized");
    uint64_t attrs_end = static_cast<uint64_t>(chsize) + attr_start +
                         static_cast<uint64_t>(attr_size) * attr_count;
    if (attrs_end > size)
      fail(AxmlError::Kind::MalformedChunk,
           "attribute array exceeds element chunk");

    for (uint16_t i = 0; i < attr_count; ++i) {
      size_t a = pos + chsize + attr_start + static_cast<size_t>(attr_size) * i;
      uint32_t ans = r_.u32_at(a);
      uint32_t aname = r_.u32_at(a + 4);
      // a + 8 is the raw string value; the typed value that follows is
      // authoritative.
      uint8_t data_type = r_.bytes_at(a + 15, 1)[0];
      uint32_t data = r_.u32_at(a + 16);

      AxmlAttribute attr;
      attr.ns = optional_pool_string(ans, "attribute namespace");
      attr.name = pool_string(aname, "attribute name");
      attr.value = decode_value(data_type, data);

      bool duplicate = false;
      for (const auto& existing : elem.attributes) {
        if (existing.ns == attr.ns && existing.name == attr.name) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) {
        doc_.warnings.push_back("duplicate attribute '" + attr.name +
                                "' on <" + elem.name + "> ignored");
      } else {
        elem.attributes.push_back(std::move(attr));
      }
    }

    root_seen_ = true;
    stack_.push_back(std::move(elem));
  }

  void handle_end_element(size_t pos, uint16_t chsize, uint32_t size) {
    require_node_header(chsize, size, 8);
    uint32_t name = r_.u32_at(pos + chsize + 4);
    if (stack_.empty())
      fail(AxmlError::Kind::MalformedChunk, "element end without start");
    std::string end_name = pool_string(name, "element end name");
    if (end_name != stack_.back().name)
      fail(AxmlError::Kind::MalformedChunk,
           "mismatched element end </" + end_name + "> for <" +
               stack_.back().name + ">");
    AxmlElement done = std::move(stack_.back());
    stack_.pop_back();
    if (stack_.empty()) {
      doc_.root = std::move(done);
    } else {
      stack_.back().children.push_back(std::move(done));
    }
  }

  detail::ByteReader r_;
  AxmlDocument doc_;
  std::vector<AxmlElement> stack_;
  int namespace_depth_ = 0;
  bool root_seen_ = false;
};

}  // namespace

float TypedValue::as_float() const { return std::bit_cast<float>(data); }

std::string TypedValue::display() const {
  char buf[32];
  switch (kind) {
    case Kind::String:
      return str;
    case Kind::Boolean:
      return as_bool() ? "true" : "false";
    case Kind::IntDec:
    case Kind::IntFamily:
      return std::to_string(as_int());
    case Kind::IntHex:
      std::snprintf(buf, sizeof(buf), "0x%x", data);
      return buf;
    case Kind::Reference:
      std::snprintf(buf, sizeof(buf), "@0x%08x", data);
      return buf;
    case Kind::Float:
      std::snprintf(buf, sizeof(buf), "%g", static_cast<double>(as_float()));
      return buf;
    case Kind::Raw:
      std::snprintf(buf, sizeof(buf), "(type=0x%02x data=0x%08x)", data_type,
                    data);
      return buf;
  }
  return {};
}

const AxmlAttribute* AxmlElement::find_attr(std::optional<std::string_view> ns,
                                            std::string_view name) const {
  for (const auto& attr : attributes) {
    bool ns_match = ns.has_value()
                        ? (attr.ns.has_value() && *attr.ns == *ns)
                        : !attr.ns.has_value();
    if (ns_match && attr.name == name) return &attr;
  }
  return nullptr;
}

AxmlDocument decode_axml(std::span<const uint8_t> data) {
  try {
    return Decoder(data).run();
  } catch (const detail::OutOfRange&) {
    // Any read that escaped the explicit bounds checks.
    throw AxmlError(AxmlError::Kind::MalformedChunk,
                    "chunk data extends past end of input");
  }
}

std::vector<const AxmlElement*> find_elements(
    const AxmlDocument& doc, std::span<const std::string_view> path) {
  std::vector<const AxmlElement*> frontier;
  if (path.empty() || doc.root.name != path.front()) return frontier;

  // Level-by-level walk along the name path; result stays in document order.
  frontier.push_back(&doc.root);
  for (size_t depth = 1; depth < path.size() && !frontier.empty(); ++depth) {
    std::vector<const AxmlElement*> next;
    for (const auto* elem : frontier)
      for (const auto& child : elem->children)
        if (child.name == path[depth]) next.push_back(&child);
    frontier = std::move(next);
  }
  return frontier;
}

std::optional<TypedValue> get_attr(const AxmlElement& elem,
                                   std::optional<std::string_view> ns,
                                   std::string_view name) {
  const AxmlAttribute* attr = elem.find_attr(ns, name);
  if (!attr) return std::nullopt;
  return attr->value;
}

}  // namespace manifestscope
