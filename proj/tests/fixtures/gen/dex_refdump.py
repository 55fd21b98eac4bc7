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

"""Reference DEX string-section dump (test oracle).

Independent of dex_encode.py and of the analyzer: reads string_ids_size /
string_ids_off from the header, then decodes every string_data_item from
modified UTF-8 by first recovering the UTF-16 code-unit stream and then
combining surrogate pairs. Run as a script: dex_refdump.py FILE > dump.json
"""

import json
import struct
import sys


def _read_uleb128(data, pos):
    value = 0
    shift = 0
    while True:
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


def _decode_string(data, pos):
    _, pos = _read_uleb128(data, pos)
    units = []
    while True:
        b = data[pos]
        if b == 0:
            break
        if b < 0x80:
            units.append(b)
            pos += 1
        elif (b & 0xE0) == 0xC0:
            units.append(((b & 0x1F) << 6) | (data[pos + 1] & 0x3F))
            pos += 2
        elif (b & 0xF0) == 0xE0:
            units.append(((b & 0x0F) << 12) | ((data[pos + 1] & 0x3F) << 6)
                         | (data[pos + 2] & 0x3F))
            pos += 3
        else:
            raise ValueError("invalid modified UTF-8 byte 0x%02x" % b)
    chars = []
    i = 0
    while i < len(units):
        u = units[i]
        if 0xD800 <= u <= 0xDBFF and i + 1 < len(units) \
                and 0xDC00 <= units[i + 1] <= 0xDFFF:
            cp = 0x10000 + ((u - 0xD800) << 10) + (units[i + 1] - 0xDC00)
            chars.append(chr(cp))
            i += 2
        else:
            chars.append(chr(u))
            i += 1
    return "".join(chars)


def dump(data):
    if data[:4] != b"dex\n" or data[7] != 0:
        raise ValueError("not a dex file")
    version = data[4:7].decode("ascii")
    count = struct.unpack_from("<I", data, 0x38)[0]
    off = struct.unpack_from("<I", data, 0x3C)[0]
    strings = []
    for i in range(count):
        str_off = struct.unpack_from("<I", data, off + 4 * i)[0]
        strings.append(_decode_string(data, str_off))
    return {"version": version, "strings": strings}


def main():
    with open(sys.argv[1], "rb") as f:
        data = f.read()
    json.dump(dump(data), sys.stdout, indent=1, ensure_ascii=False,
              sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
