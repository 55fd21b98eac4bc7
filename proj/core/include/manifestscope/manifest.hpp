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

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "manifestscope/apk.hpp"
#include "manifestscope/axml.hpp"
#include "manifestscope/errors.hpp"

namespace manifestscope {

enum class PermissionClass {
  Normal,
  Sensitive,
  TrackingRelevant,
  Unknown,
};

struct PermissionRecord {
  std::string name;
  PermissionClass classification = PermissionClass::Unknown;
};

enum class ComponentKind {
  Activity,
  Service,
  Receiver,
  Provider,
};

enum class ExportedSource {
  Explicit,
  ImpliedByIntentFilter,
  Default,
};

struct ComponentRecord {
  ComponentKind kind = ComponentKind::Activity;
  std::string name;
  bool exported_effective = false;
  ExportedSource exported_source = ExportedSource::Default;
  bool has_intent_filter = false;
  bool protected_by_permission = false;
  bool deep_link = false;         // VIEW + BROWSABLE + data scheme in one filter
  bool install_referrer = false;  // filter action is com.android.vending.INSTALL_REFERRER
  bool launcher = false;          // MAIN + LAUNCHER filter
};

// android:allowBackup is tri-state: the platform default (true) applies when
// the attribute is absent, and the risk rubric distinguishes implicit from
// explicit enablement.
enum class BackupSetting {
  ExplicitTrue,
  ExplicitFalse,
  DefaultUnset,
};

enum class CleartextSetting {
  ExplicitTrue,
  ExplicitFalse,
  Default,  // resolved by target_sdk (< 28 permitted, >= 28 not)
};

enum class NscCleartext {
  True,
  False,
  Unresolved,
};

struct ManifestFacts {
  std::string package_id;
  std::optional<int> target_sdk;
  std::vector<PermissionRecord> permissions;
  BackupSetting allow_backup = BackupSetting::DefaultUnset;
  bool backup_agent_declared = false;
  bool restore_any_version = false;
  bool full_backup_content_declared = false;
  bool data_extraction_rules_declared = false;
  CleartextSetting cleartext_traffic = CleartextSetting::Default;
  bool nsc_reference = false;
  NscCleartext nsc_permits_cleartext = NscCleartext::Unresolved;
  std::vector<ComponentRecord> components;
  std::vector<std::pair<std::string, std::string>> metadata_keys;
  std::vector<std::string> warnings;

  // Platform default is backup-enabled when the attribute is absent.
  bool backup_effectively_enabled() const {
    return allow_backup != BackupSetting::ExplicitFalse;
  }
  bool backup_explicit() const {
    return allow_backup != BackupSetting::DefaultUnset;
  }
  // Cleartext default: permitted below targetSdk 28, denied from 28 on.
  bool cleartext_default_permitted() const {
    return !target_sdk.has_value() || *target_sdk < 28;
  }
  int exported_unprotected_nonlauncher() const;
  int sensitive_permission_count() const;
  bool has_tracking_relevant_permission() const;
};

// Permission -> classification lookup, loaded from the line-oriented table
// (`<permission-name> <class>`, `#` comments). Total and pure: unlisted
// names classify as Unknown.
class PermissionClassifier {
 public:
  static const PermissionClassifier& bundled();
  static PermissionClassifier from_text(std::string_view table,
                                        const std::string& origin);

  PermissionClass classify(std::string_view permission) const;
  size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, PermissionClass> table_;
};

// Classification against the bundled table.
PermissionClass classify_permission(std::string_view permission);

// Effective android:exported semantics. Explicit value wins; otherwise the
// pre-31 default is implied by intent-filter presence. From targetSdk 31 a
// filtered component without the attribute is invalid on-platform: recorded
// as not exported, source Default, with a lint warning appended.
std::pair<bool, ExportedSource> resolve_exported(
    std::optional<bool> explicit_attr, bool has_intent_filter,
    std::optional<int> target_sdk, std::vector<std::string>* warnings = nullptr);

// Converts a decoded AndroidManifest.xml into the full indicator vector.
// `archive` (optional) is probed at conventional res/xml paths to resolve a
// referenced network-security-config. Throws ManifestError::NotAManifest
// when the root element is not <manifest>.
ManifestFacts extract_facts(const AxmlDocument& doc,
                            const ApkArchive* archive = nullptr,
                            const PermissionClassifier& classifier =
                                PermissionClassifier::bundled());

}  // namespace manifestscope
