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

#include "manifestscope/fingerprints.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "bundled_data.hpp"

namespace manifestscope {

namespace {

[[noreturn]] void fail(SignatureError::Kind kind, const std::string& msg) {
  throw SignatureError(kind, msg);
}

std::optional<SdkCategory> parse_category(std::string_view token) {
  if (token == "analytics") return SdkCategory::Analytics;
  if (token == "advertising") return SdkCategory::Advertising;
  if (token == "attribution") return SdkCategory::Attribution;
  return std::nullopt;
}

std::optional<MatchKind> parse_match_kind(std::string_view token) {
  if (token == "package-prefix") return MatchKind::PackagePrefix;
  if (token == "metadata-key") return MatchKind::MetadataKey;
  if (token == "component-class") return MatchKind::ComponentClass;
  if (token == "permission-name") return MatchKind::PermissionName;
  return std::nullopt;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

const SignatureDb& SignatureDb::bundled() {
  static const SignatureDb instance =
      parse(detail::kBundledSignatureDb, "<bundled signature db>");
  return instance;
}

SignatureDb SignatureDb::parse(std::string_view text,
                               const std::string& origin) {
  SignatureDb db;
  size_t lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      // `# db-version: <v>` directive; every other comment is skipped.
      std::string_view body = trim(line.substr(1));
      if (body.starts_with("db-version:"))
        db.version = std::string(trim(body.substr(sizeof("db-version:") - 1)));
      continue;
    }

    auto fields = split_tabs(line);
    if (fields.size() != 4)
      fail(SignatureError::Kind::MalformedSignatureFile,
           origin + ":" + std::to_string(lineno) + ": expected 4 tab-separated "
           "fields `vendor\\tcategory\\tmatch_kind\\tpattern`, got " +
           std::to_string(fields.size()));
    SdkSignature sig;
    sig.vendor = std::string(trim(fields[0]));
    auto category = parse_category(trim(fields[1]));
    auto match_kind = parse_match_kind(trim(fields[2]));
    sig.pattern = std::string(trim(fields[3]));
    if (sig.vendor.empty())
      fail(SignatureError::Kind::MalformedSignatureFile,
           origin + ":" + std::to_string(lineno) + ": empty vendor");
    if (!category)
      fail(SignatureError::Kind::MalformedSignatureFile,
           origin + ":" + std::to_string(lineno) + ": unknown category '" +
               std::string(trim(fields[1])) + "'");
    if (!match_kind)
      fail(SignatureError::Kind::MalformedSignatureFile,
           origin + ":" + std::to_string(lineno) + ": unknown match kind '" +
               std::string(trim(fields[2])) + "'");
    if (sig.pattern.empty())
      fail(SignatureError::Kind::MalformedSignatureFile,
           origin + ":" + std::to_string(lineno) + ": empty pattern");
    sig.category = *category;
    sig.match_kind = *match_kind;

    if (std::find(db.signatures.begin(), db.signatures.end(), sig) !=
        db.signatures.end())
      fail(SignatureError::Kind::DuplicateSignature,
           origin + ":" + std::to_string(lineno) + ": duplicate signature for " +
               sig.vendor + " / " + sig.pattern);
    db.signatures.push_back(std::move(sig));
  }
  return db;
}

std::vector<SdkSignature> load_signatures(std::string_view text,
                                          const std::string& origin) {
  return SignatureDb::parse(text, origin).signatures;
}

bool package_prefix_matches(std::string_view pattern,
                            std::string_view candidate) {
  if (pattern.empty() || candidate.size() < pattern.size()) return false;
  if (!candidate.starts_with(pattern)) return false;
  return candidate.size() == pattern.size() ||
         candidate[pattern.size()] == '.';
}

std::vector<SdkHit> match(const ManifestFacts& facts,
                          const std::map<std::string, std::string>& dex_prefixes,
                          std::span<const SdkSignature> signatures) {
  std::vector<SdkHit> hits;
  std::set<std::pair<std::string, SdkCategory>> seen;

  auto emit = [&](const SdkSignature& sig, EvidenceSource source,
                  std::string matched, std::string dex_name = {}) {
    if (!seen.emplace(sig.vendor, sig.category).second) return false;
    hits.push_back(SdkHit{sig, source, std::move(matched), std::move(dex_name)});
    return true;
  };

  for (const auto& sig : signatures) {
    switch (sig.match_kind) {
      case MatchKind::MetadataKey:
        for (const auto& [name, value] : facts.metadata_keys) {
          if (name == sig.pattern) {
            emit(sig, EvidenceSource::ManifestMetadata, name);
            break;
          }
        }
        break;
      case MatchKind::ComponentClass:
        for (const auto& component : facts.components) {
          if (component.name == sig.pattern) {
            emit(sig, EvidenceSource::ManifestComponent, component.name);
            break;
          }
        }
        break;
      case MatchKind::PermissionName:
        for (const auto& permission : facts.permissions) {
          if (permission.name == sig.pattern) {
            emit(sig, EvidenceSource::ManifestPermission, permission.name);
            break;
          }
        }
        break;
      case MatchKind::PackagePrefix: {
        // Manifest evidence (component class names) before DEX evidence.
        bool matched = false;
        for (const auto& component : facts.components) {
          if (package_prefix_matches(sig.pattern, component.name)) {
            emit(sig, EvidenceSource::ManifestComponent, component.name);
            matched = true;
            break;
          }
        }
        if (matched) break;
        for (const auto& [prefix, dex_name] : dex_prefixes) {
          if (package_prefix_matches(sig.pattern, prefix)) {
            emit(sig, EvidenceSource::DexString, prefix, dex_name);
            break;
          }
        }
        break;
      }
    }
  }
  return hits;
}

std::vector<SdkHit> match(const ManifestFacts& facts,
                          const std::set<std::string>& dex_prefixes,
                          std::span<const SdkSignature> signatures) {
  std::map<std::string, std::string> with_source;
  for (const auto& prefix : dex_prefixes) with_source.emplace(prefix, "");
  return match(facts, with_source, signatures);
}

}  // namespace manifestscope
