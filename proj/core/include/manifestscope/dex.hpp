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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "manifestscope/errors.hpp"

namespace manifestscope {

// The string_ids/string_data sections of one DEX file, fully decoded from
// modified UTF-8. Class/method/code sections are intentionally not parsed;
// fingerprinting needs only strings.
struct DexStringTable {
  std::string dex_name;  // archive entry name, e.g. "classes2.dex"
  std::string version;   // "035".."041"
  std::vector<std::string> strings;
  std::vector<std::string> warnings;
};

// Parses the header and string table. Throws DexError: NotADex (magic is not
// `dex\n0NN\0`), TruncatedDex (header or string data cut short), or
// BadStringOffset (a string_id points outside the file).
DexStringTable scan_dex(std::span<const uint8_t> data,
                        std::string dex_name = {});

// Normalizes every class descriptor `L<path>;` in the table to dotted
// package form (Lcom/foo/Bar; -> com.foo.Bar). Non-descriptor strings are
// ignored.
std::set<std::string> collect_class_prefixes(const DexStringTable& table);

}  // namespace manifestscope
