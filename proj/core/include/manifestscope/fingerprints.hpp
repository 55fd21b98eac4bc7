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

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manifestscope/errors.hpp"
#include "manifestscope/manifest.hpp"

namespace manifestscope {

enum class SdkCategory {
  Analytics,
  Advertising,
  Attribution,
};

enum class MatchKind {
  PackagePrefix,   // dotted prefix with package boundary
  MetadataKey,     // exact <meta-data android:name> equality
  ComponentClass,  // exact component class name
  PermissionName,  // exact permission equality
};

struct SdkSignature {
  std::string vendor;
  SdkCategory category = SdkCategory::Analytics;
  MatchKind match_kind = MatchKind::PackagePrefix;
  std::string pattern;

  friend bool operator==(const SdkSignature&, const SdkSignature&) = default;
};

enum class EvidenceSource {
  ManifestMetadata,
  ManifestComponent,
  ManifestPermission,
  DexString,
};

struct SdkHit {
  SdkSignature signature;
  EvidenceSource source = EvidenceSource::ManifestMetadata;
  std::string matched;   // the string the pattern matched
  std::string dex_name;  // set for DexString evidence
};

// Signature database: line-oriented, tab-separated
// `vendor<TAB>category<TAB>match_kind<TAB>pattern`, `#` comments, UTF-8.
// A `# db-version: <v>` directive line sets the version.
struct SignatureDb {
  std::string version;
  std::vector<SdkSignature> signatures;

  static const SignatureDb& bundled();

  // Throws SignatureError: MalformedSignatureFile (with line number) or
  // DuplicateSignature.
  static SignatureDb parse(std::string_view text, const std::string& origin);
};

std::vector<SdkSignature> load_signatures(std::string_view text,
                                          const std::string& origin);

// True when `candidate` equals `pattern` or extends it across a package
// boundary: "com.appsflyer" matches "com.appsflyer.internal.X" but never
// "com.appsflyerx.Y".
bool package_prefix_matches(std::string_view pattern,
                            std::string_view candidate);

// Matches signatures against manifest declarations and DEX class prefixes.
// `dex_prefixes` maps a normalized class prefix to the DEX file it came
// from. Hits are deduplicated by (vendor, category), first evidence wins;
// evaluation order is DB order, manifest evidence before DEX evidence.
std::vector<SdkHit> match(const ManifestFacts& facts,
                          const std::map<std::string, std::string>& dex_prefixes,
                          std::span<const SdkSignature> signatures);

// Set-based convenience overload (no DEX file attribution).
std::vector<SdkHit> match(const ManifestFacts& facts,
                          const std::set<std::string>& dex_prefixes,
                          std::span<const SdkSignature> signatures);

}  // namespace manifestscope
