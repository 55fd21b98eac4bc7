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

#include "manifestscope/analyzer.hpp"

#include <algorithm>
#include <map>

#include "manifestscope/apk.hpp"
#include "manifestscope/axml.hpp"
#include "manifestscope/dex.hpp"

namespace manifestscope {

namespace {

bool is_classes_dex(const std::string& name) {
  // classes.dex, classes2.dex, ... at the archive root.
  if (!name.starts_with("classes") || !name.ends_with(".dex")) return false;
  std::string_view middle(name.data() + 7, name.size() - 7 - 4);
  return middle.empty() ||
         std::all_of(middle.begin(), middle.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

AppAnalysis analyze_apk(const std::filesystem::path& apk_path,
                        const AnalyzeOptions& options) {
  const SignatureDb& db =
      options.signature_db ? *options.signature_db : SignatureDb::bundled();
  const PermissionClassifier& classifier = options.classifier
                                               ? *options.classifier
                                               : PermissionClassifier::bundled();

  AppAnalysis app;
  app.signature_db_version = db.version;

  ApkArchive archive = ApkArchive::open(apk_path);
  std::vector<uint8_t> manifest_bytes = archive.read("AndroidManifest.xml");
  AxmlDocument doc = decode_axml(manifest_bytes);
  for (const auto& warning : doc.warnings)
    app.warnings.push_back("axml: " + warning);

  app.facts = extract_facts(doc, &archive, classifier);
  app.package = app.facts.package_id;
  app.app_id = app.package.empty() ? apk_path.stem().string() : app.package;

  // Scan every classes*.dex; the union of prefixes feeds fingerprinting.
  std::map<std::string, std::string> dex_prefixes;
  bool any_dex = false;
  std::vector<std::string> dex_names;
  for (const auto& entry : archive.entries())
    if (is_classes_dex(entry.name)) dex_names.push_back(entry.name);
  std::sort(dex_names.begin(), dex_names.end());
  for (const auto& name : dex_names) {
    any_dex = true;
    try {
      DexStringTable table = scan_dex(archive.read(name), name);
      for (const auto& warning : table.warnings)
        app.warnings.push_back(name + ": " + warning);
      for (auto& prefix : collect_class_prefixes(table))
        dex_prefixes.emplace(prefix, name);  // first file wins, order is sorted
    } catch (const Error& e) {
      app.warnings.push_back(name + " unreadable: " + e.what());
    }
  }

  app.sdk_hits = match(app.facts, dex_prefixes, db.signatures);

  bool dex_matched_known_root = std::any_of(
      app.sdk_hits.begin(), app.sdk_hits.end(), [](const SdkHit& hit) {
        return hit.source == EvidenceSource::DexString;
      });
  app.fingerprint_coverage =
      (any_dex && !dex_matched_known_root) ? "manifest-only" : "full";
  if (app.fingerprint_coverage == "manifest-only")
    app.warnings.push_back(
        "fingerprint coverage: manifest-only (no DEX class prefix matched a "
        "known SDK root; names may be obfuscated)");

  if (app.facts.nsc_reference &&
      app.facts.nsc_permits_cleartext == NscCleartext::Unresolved)
    app.warnings.push_back(
        "network security config unresolved; cleartext posture not counted "
        "as a strong indicator");

  app.indicator_vector = build_indicator_vector(app.facts, app.sdk_hits);
  app.risk = assess(app.indicator_vector, options.policy);
  app.risk.app_id = app.app_id;
  return app;
}

}  // namespace manifestscope
