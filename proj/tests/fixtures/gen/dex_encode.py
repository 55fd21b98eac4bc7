# Copyright (C) 2026 The ManifestScope Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Minimal DEX builder for test fixtures.

Emits a valid DEX file containing only a string table (plus the map list),
with correct adler32 checksum and SHA-1 signature. Strings are encoded as
ULEB128 UTF-16 length + modified UTF-8 payload: U+0000 becomes 0xC0 0x80 and
supplementary code points become CESU-8 surrogate pairs.
"""

import hashlib
import struct
import zlib

HEADER_SIZE = 0x70
ENDIAN_TAG = 0x12345678


def encode_uleb128(value):
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def encode_mutf8(s):
    out = bytearray()
    utf16_units = 0
    for ch in s:
        cp = ord(ch)
        if cp == 0:
            out += b"\xc0\x80"
            utf16_units += 1
        elif cp < 0x80:
            out.append(cp)
            utf16_units += 1
        elif cp < 0x800:
            out.append(0xC0 | (cp >> 6))
            out.append(0x80 | (cp & 0x3F))
            utf16_units += 1
        elif cp < 0x10000:
            out.append(0xE0 | (cp >> 12))
            out.append(0x80 | ((cp >> 6) & 0x3F))
            out.append(0x80 | (cp & 0x3F))
            utf16_units += 1
        else:
            cp -= 0x10000
            for unit in (0xD800 + (cp >> 10), 0xDC00 + (cp & 0x3FF)):
                out.append(0xE0 | (unit >> 12))
                out.append(0x80 | ((unit >> 6) & 0x3F))
                out.append(0x80 | (unit & 0x3F))
            utf16_units += 2
    return bytes(out), utf16_units


def build(strings, version="035"):
    string_ids_off = HEADER_SIZE if strings else 0
    data_off = HEADER_SIZE + 4 * len(strings)

    string_data = bytearray()
    offsets = []
    for s in strings:
        offsets.append(data_off + len(string_data))
        payload, units = encode_mutf8(s)
        string_data += encode_uleb128(units) + payload + b"\x00"
    while len(string_data) % 4:
        string_data += b"\x00"

    map_off = data_off + len(string_data)
    map_items = [(0x0000, 1, 0)]  # header_item
    if strings:
        map_items.append((0x0001, len(strings), string_ids_off))
        map_items.append((0x2002, len(strings), offsets[0]))
    map_items.append((0x1000, 1, map_off))
    map_list = struct.pack("<I", len(map_items))
    for item_type, count, off in map_items:
        map_list += struct.pack("<HHII", item_type, 0, count, off)

    file_size = map_off + len(map_list)
    data_size = len(string_data) + len(map_list)

    header = bytearray(HEADER_SIZE)
    header[0:8] = b"dex\n" + version.encode("ascii") + b"\x00"
    struct.pack_into("<I", header, 0x20, file_size)
    struct.pack_into("<I", header, 0x24, HEADER_SIZE)
    struct.pack_into("<I", header, 0x28, ENDIAN_TAG)
    # link_size/link_off stay zero
    struct.pack_into("<I", header, 0x34, map_off)
    struct.pack_into("<I", header, 0x38, len(strings))
    struct.pack_into("<I", header, 0x3C, string_ids_off)
    # type/proto/field/method/class sections stay zero
    struct.pack_into("<I", header, 0x68, data_size)
    struct.pack_into("<I", header, 0x6C, data_off)

    body = bytes(header)
    body += b"".join(struct.pack("<I", off) for off in offsets)
    body += bytes(string_data)
    body += map_list

    body = bytearray(body)
    body[12:32] = hashlib.sha1(body[32:]).digest()
    struct.pack_into("<I", body, 8, zlib.adler32(bytes(body[12:])) & 0xFFFFFFFF)
    return bytes(body)
