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

#include "manifestscope/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "bundled_data.hpp"

namespace manifestscope {

namespace {

constexpr std::string_view kActionMain = "android.intent.action.MAIN";
constexpr std::string_view kActionView = "android.intent.action.VIEW";
constexpr std::string_view kActionInstallReferrer =
    "com.android.vending.INSTALL_REFERRER";
constexpr std::string_view kCategoryLauncher =
    "android.intent.category.LAUNCHER";
constexpr std::string_view kCategoryBrowsable =
    "android.intent.category.BROWSABLE";

std::optional<bool> attr_as_bool(const AxmlElement& elem,
                                 std::string_view name) {
  auto value = get_attr(elem, kAndroidNamespace, name);
  if (!value) return std::nullopt;
  if (value->kind == TypedValue::Kind::Boolean) return value->as_bool();
  // Tolerate string-encoded booleans seen in hand-built manifests.
  if (value->kind == TypedValue::Kind::String) {
    if (value->str == "true") return true;
    if (value->str == "false") return false;
  }
  return std::nullopt;
}

std::optional<int> attr_as_int(const AxmlElement& elem, std::string_view name) {
  auto value = get_attr(elem, kAndroidNamespace, name);
  if (!value) return std::nullopt;
  switch (value->kind) {
    case TypedValue::Kind::IntDec:
    case TypedValue::Kind::IntHex:
    case TypedValue::Kind::IntFamily:
      return value->as_int();
    case TypedValue::Kind::String: {
      int out = 0;
      auto [ptr, ec] = std::from_chars(
          value->str.data(), value->str.data() + value->str.size(), out);
      if (ec == std::errc() && ptr == value->str.data() + value->str.size())
        return out;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<std::string> attr_as_string(const AxmlElement& elem,
                                          std::string_view name) {
  auto value = get_attr(elem, kAndroidNamespace, name);
  if (!value) return std::nullopt;
  return value->display();
}

const AxmlElement* first_child(const AxmlElement& elem, std::string_view name) {
  for (const auto& child : elem.children)
    if (child.name == name) return &child;
  return nullptr;
}

struct FilterSummary {
  bool any = false;
  bool launcher = false;
  bool deep_link = false;
  bool install_referrer = false;
};

FilterSummary summarize_filters(const AxmlElement& component) {
  FilterSummary out;
  for (const auto& child : component.children) {
    if (child.name != "intent-filter") continue;
    out.any = true;
    bool action_main = false, action_view = false, action_referrer = false;
    bool cat_launcher = false, cat_browsable = false, data_scheme = false;
    for (const auto& part : child.children) {
      auto name = attr_as_string(part, "name");
      if (part.name == "action" && name) {
        action_main |= *name == kActionMain;
        action_view |= *name == kActionView;
        action_referrer |= *name == kActionInstallReferrer;
      } else if (part.name == "category" && name) {
        cat_launcher |= *name == kCategoryLauncher;
        cat_browsable |= *name == kCategoryBrowsable;
      } else if (part.name == "data") {
        data_scheme |= attr_as_string(part, "scheme").has_value();
      }
    }
    out.launcher |= action_main && cat_launcher;
    out.deep_link |= action_view && cat_browsable && data_scheme;
    out.install_referrer |= action_referrer;
  }
  return out;
}

std::optional<ComponentKind> component_kind(std::string_view element_name) {
  if (element_name == "activity" || element_name == "activity-alias")
    return ComponentKind::Activity;
  if (element_name == "service") return ComponentKind::Service;
  if (element_name == "receiver") return ComponentKind::Receiver;
  if (element_name == "provider") return ComponentKind::Provider;
  return std::nullopt;
}

void collect_metadata(const AxmlElement& elem,
                      std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& child : elem.children) {
    if (child.name == "meta-data") {
      auto name = attr_as_string(child, "name");
      if (!name) continue;
      auto value = attr_as_string(child, "value");
      if (!value) value = attr_as_string(child, "resource");
      out.emplace_back(*name, value.value_or(""));
    } else {
      collect_metadata(child, out);
    }
  }
}

// Conventional compiled-resource paths for a referenced network security
// config; resources.arsc is deliberately not parsed, so this is a heuristic
// and unresolved cases are surfaced as such.
std::vector<std::string> nsc_candidate_paths(const ApkArchive& archive) {
  std::vector<std::string> candidates;
  for (const auto& entry : archive.entries()) {
    if (!entry.name.starts_with("res/xml/") || !entry.name.ends_with(".xml"))
      continue;
    std::string base = entry.name.substr(8);
    if (base.find("network_security") != std::string::npos ||
        base.find("network-security") != std::string::npos)
      candidates.push_back(entry.name);
  }
  std::sort(candidates.begin(), candidates.end());
  // Exact conventional name wins.
  auto exact = std::find(candidates.begin(), candidates.end(),
                         std::string("res/xml/network_security_config.xml"));
  if (exact != candidates.end()) std::rotate(candidates.begin(), exact, exact + 1);
  return candidates;
}

void collect_cleartext_attrs(const AxmlElement& elem, std::vector<bool>& out) {
  for (const auto& attr : elem.attributes) {
    if (attr.name != "cleartextTrafficPermitted") continue;
    if (attr.value.kind == TypedValue::Kind::Boolean)
      out.push_back(attr.value.as_bool());
    else if (attr.value.kind == TypedValue::Kind::String)
      out.push_back(attr.value.str == "true");
  }
  for (const auto& child : elem.children) collect_cleartext_attrs(child, out);
}

NscCleartext resolve_nsc(const ApkArchive& archive,
                         std::vector<std::string>& warnings) {
  for (const auto& path : nsc_candidate_paths(archive)) {
    std::vector<uint8_t> bytes;
    try {
      bytes = archive.read(path);
    } catch (const ZipError&) {
      warnings.push_back("network security config " + path + " unreadable");
      continue;
    }
    try {
      AxmlDocument doc = decode_axml(bytes);
      std::vector<bool> attrs;
      collect_cleartext_attrs(doc.root, attrs);
      if (attrs.empty()) {
        warnings.push_back("network security config " + path +
                           " carries no cleartextTrafficPermitted attribute");
        return NscCleartext::Unresolved;
      }
      bool any_true =
          std::any_of(attrs.begin(), attrs.end(), [](bool b) { return b; });
      return any_true ? NscCleartext::True : NscCleartext::False;
    } catch (const AxmlError& e) {
      warnings.push_back("network security config " + path +
                         " not decodable: " + e.what());
    }
  }
  warnings.push_back(
      "networkSecurityConfig referenced but no decodable res/xml candidate "
      "found; cleartext posture unresolved");
  return NscCleartext::Unresolved;
}

PermissionClass parse_class(std::string_view token) {
  if (token == "normal") return PermissionClass::Normal;
  if (token == "sensitive") return PermissionClass::Sensitive;
  if (token == "tracking-relevant") return PermissionClass::TrackingRelevant;
  return PermissionClass::Unknown;
}

}  // namespace

int ManifestFacts::exported_unprotected_nonlauncher() const {
  int count = 0;
  for (const auto& c : components)
    if (c.exported_effective && !c.protected_by_permission && !c.launcher)
      ++count;
  return count;
}

int ManifestFacts::sensitive_permission_count() const {
  std::set<std::string_view> distinct;
  for (const auto& p : permissions)
    if (p.classification == PermissionClass::Sensitive) distinct.insert(p.name);
  return static_cast<int>(distinct.size());
}

bool ManifestFacts::has_tracking_relevant_permission() const {
  return std::any_of(permissions.begin(), permissions.end(), [](const auto& p) {
    return p.classification == PermissionClass::TrackingRelevant;
  });
}

const PermissionClassifier& PermissionClassifier::bundled() {
  static const PermissionClassifier instance = from_text(
      detail::kBundledPermissionTable, "<bundled permission table>");
  return instance;
}

PermissionClassifier PermissionClassifier::from_text(std::string_view table,
                                                     const std::string& origin) {
  PermissionClassifier out;
  std::istringstream in{std::string(table)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name, cls, extra;
    if (!(fields >> name)) continue;  // blank/comment line
    if (!(fields >> cls) || (fields >> extra))
      throw Error(origin + ":" + std::to_string(lineno) +
                  ": expected `<permission-name> <class>`");
    PermissionClass parsed = parse_class(cls);
    if (parsed == PermissionClass::Unknown)
      throw Error(origin + ":" + std::to_string(lineno) +
                  ": unknown permission class '" + cls + "'");
    out.table_[name] = parsed;
  }
  return out;
}

PermissionClass PermissionClassifier::classify(
    std::string_view permission) const {
  auto it = table_.find(std::string(permission));
  return it == table_.end() ? PermissionClass::Unknown : it->second;
}

PermissionClass classify_permission(std::string_view permission) {
  return PermissionClassifier::bundled().classify(permission);
}

std::pair<bool, ExportedSource> resolve_exported(
    std::optional<bool> explicit_attr, bool has_intent_filter,
    std::optional<int> target_sdk, std::vector<std::string>* warnings) {
  if (explicit_attr.has_value())
    return {*explicit_attr, ExportedSource::Explicit};
  if (!target_sdk.has_value() || *target_sdk < 31)
    return {has_intent_filter, ExportedSource::ImpliedByIntentFilter};
  if (has_intent_filter && warnings)
    warnings->push_back(
        "component with intent filter lacks android:exported; invalid on "
        "targetSdk >= 31, treated as not exported");
  return {false, ExportedSource::Default};
}

ManifestFacts extract_facts(const AxmlDocument& doc, const ApkArchive* archive,
                            const PermissionClassifier& classifier) {
  if (doc.root.name != "manifest")
    throw ManifestError(ManifestError::Kind::NotAManifest,
                        "root element is <" + doc.root.name +
                            ">, expected <manifest>");

  ManifestFacts facts;
  if (auto package = get_attr(doc.root, std::nullopt, "package"))
    facts.package_id = package->display();

  if (const AxmlElement* uses_sdk = first_child(doc.root, "uses-sdk"))
    facts.target_sdk = attr_as_int(*uses_sdk, "targetSdkVersion");

  std::set<std::string> seen_permissions;
  for (const auto& child : doc.root.children) {
    if (child.name != "uses-permission" &&
        child.name != "uses-permission-sdk-23")
      continue;
    auto name = attr_as_string(child, "name");
    if (!name || !seen_permissions.insert(*name).second) continue;
    facts.permissions.push_back(
        PermissionRecord{*name, classifier.classify(*name)});
  }

  const AxmlElement* application = first_child(doc.root, "application");
  bool nsc_on_manifest =
      get_attr(doc.root, kAndroidNamespace, "networkSecurityConfig").has_value();
  bool nsc_on_application = false;

  if (application) {
    if (auto allow = attr_as_bool(*application, "allowBackup"))
      facts.allow_backup = *allow ? BackupSetting::ExplicitTrue
                                  : BackupSetting::ExplicitFalse;
    facts.backup_agent_declared =
        attr_as_string(*application, "backupAgent").has_value();
    facts.restore_any_version =
        attr_as_bool(*application, "restoreAnyVersion").value_or(false);
    facts.full_backup_content_declared =
        get_attr(*application, kAndroidNamespace, "fullBackupContent")
            .has_value();
    facts.data_extraction_rules_declared =
        get_attr(*application, kAndroidNamespace, "dataExtractionRules")
            .has_value();
    if (auto cleartext = attr_as_bool(*application, "usesCleartextTraffic"))
      facts.cleartext_traffic = *cleartext ? CleartextSetting::ExplicitTrue
                                           : CleartextSetting::ExplicitFalse;
    nsc_on_application =
        get_attr(*application, kAndroidNamespace, "networkSecurityConfig")
            .has_value();

    for (const auto& child : application->children) {
      auto kind = component_kind(child.name);
      if (!kind) continue;
      ComponentRecord component;
      component.kind = *kind;
      component.name = attr_as_string(child, "name").value_or("");
      component.protected_by_permission =
          attr_as_string(child, "permission").has_value();
      FilterSummary filters = summarize_filters(child);
      component.has_intent_filter = filters.any;
      component.launcher = filters.launcher;
      component.deep_link = filters.deep_link;
      component.install_referrer = filters.install_referrer;
      auto [effective, source] =
          resolve_exported(attr_as_bool(child, "exported"), filters.any,
                           facts.target_sdk, &facts.warnings);
      component.exported_effective = effective;
      component.exported_source = source;
      facts.components.push_back(std::move(component));
    }

    collect_metadata(*application, facts.metadata_keys);
  } else {
    facts.warnings.push_back("manifest has no <application> element");
  }

  facts.nsc_reference = nsc_on_manifest || nsc_on_application;
  if (facts.nsc_reference && archive)
    facts.nsc_permits_cleartext = resolve_nsc(*archive, facts.warnings);

  return facts;
}

}  // namespace manifestscope
