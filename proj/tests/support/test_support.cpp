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

#include "test_support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mstest {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace manifestscope;

fs::path fixture_dir() { return fs::path(MANIFESTSCOPE_FIXTURE_DIR); }

fs::path fixture(const std::string& relative) {
  return fixture_dir() / relative;
}

fs::path cli_path() { return fs::path(MANIFESTSCOPE_CLI_PATH); }

std::vector<uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json read_json(const fs::path& path) { return json::parse(read_text(path)); }

namespace {

json value_json(const TypedValue& v) {
  switch (v.kind) {
    case TypedValue::Kind::String:
      return {{"type", "string"}, {"value", v.str}};
    case TypedValue::Kind::Boolean:
      return {{"type", "boolean"}, {"value", v.as_bool()}};
    case TypedValue::Kind::IntDec:
      return {{"type", "int-dec"}, {"value", v.as_int()}};
    case TypedValue::Kind::IntHex:
      return {{"type", "int-hex"}, {"value", v.data}};
    case TypedValue::Kind::Reference:
      return {{"type", "reference"}, {"value", v.data}};
    case TypedValue::Kind::Float:
      return {{"type", "float"}, {"bits", v.data}};
    case TypedValue::Kind::IntFamily:
      return {{"type", "int-family"},
              {"data_type", v.data_type},
              {"value", v.as_int()}};
    case TypedValue::Kind::Raw:
      return {{"type", "raw"}, {"data_type", v.data_type}, {"data", v.data}};
  }
  return {};
}

json element_json(const AxmlElement& elem) {
  std::vector<json> attrs;
  for (const auto& attr : elem.attributes) {
    json a = value_json(attr.value);
    a["ns"] = attr.ns ? json(*attr.ns) : json(nullptr);
    a["name"] = attr.name;
    attrs.push_back(std::move(a));
  }
  std::sort(attrs.begin(), attrs.end(), [](const json& a, const json& b) {
    auto key = [](const json& j) {
      return std::make_pair(j.at("ns").is_null()
                                ? std::string()
                                : j.at("ns").get<std::string>(),
                            j.at("name").get<std::string>());
    };
    return key(a) < key(b);
  });
  json children = json::array();
  for (const auto& child : elem.children) children.push_back(element_json(child));
  return {{"ns", elem.ns ? json(*elem.ns) : json(nullptr)},
          {"name", elem.name},
          {"attrs", attrs},
          {"children", children}};
}

}  // namespace

json axml_to_json(const AxmlDocument& doc) {
  return {{"string_pool", doc.string_pool},
          {"resource_map", doc.resource_map},
          {"root", element_json(doc.root)}};
}

json dex_to_json(const DexStringTable& table) {
  return {{"version", table.version}, {"strings", table.strings}};
}

int run_cli(const std::string& args, std::string* out, std::string* err) {
  fs::path dir = fs::temp_directory_path();
  fs::path out_file = dir / ("ms_cli_out_" + std::to_string(::getpid()));
  fs::path err_file = dir / ("ms_cli_err_" + std::to_string(::getpid()));
  std::string cmd = cli_path().string() + " " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int rc = std::system(cmd.c_str());
  if (out) *out = read_text(out_file);
  if (err) *err = read_text(err_file);
  fs::remove(out_file);
  fs::remove(err_file);
  if (rc < 0) return -1;
  return WEXITSTATUS(rc);
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("mstest_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<uint8_t> mutate(const std::vector<uint8_t>& seed, Rng& rng) {
  std::vector<uint8_t> out = seed;
  size_t mutations = 1 + rng.below(4);
  for (size_t m = 0; m < mutations; ++m) {
    switch (rng.below(4)) {
      case 0:  // flip a byte
        if (!out.empty()) out[rng.below(out.size())] ^= uint8_t(1 + rng.below(255));
        break;
      case 1:  // truncate
        if (!out.empty()) out.resize(rng.below(out.size()));
        break;
      case 2: {  // overwrite a 32-bit field with an extreme value
        if (out.size() >= 4) {
          size_t pos = rng.below(out.size() - 3);
          uint32_t v = rng.below(2) ? 0xFFFFFFFFu : uint32_t(rng.next());
          out[pos] = v & 0xFF;
          out[pos + 1] = (v >> 8) & 0xFF;
          out[pos + 2] = (v >> 16) & 0xFF;
          out[pos + 3] = (v >> 24) & 0xFF;
        }
        break;
      }
      case 3:  // append junk
        for (size_t i = 0, n = 1 + rng.below(16); i < n; ++i)
          out.push_back(uint8_t(rng.next()));
        break;
    }
  }
  return out;
}

}  // namespace mstest
