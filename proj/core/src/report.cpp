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

#include "manifestscope/report.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

#include "manifestscope/version.hpp"

namespace manifestscope {

namespace {

using nlohmann::json;

// Fixed string vocabulary; every enum serializes through these so report
// files stay stable across releases.

std::string_view to_string(PermissionClass c) {
  switch (c) {
    case PermissionClass::Normal: return "normal";
    case PermissionClass::Sensitive: return "sensitive";
    case PermissionClass::TrackingRelevant: return "tracking-relevant";
    case PermissionClass::Unknown: return "unknown";
  }
  return "unknown";
}

PermissionClass permission_class_from(std::string_view s) {
  if (s == "normal") return PermissionClass::Normal;
  if (s == "sensitive") return PermissionClass::Sensitive;
  if (s == "tracking-relevant") return PermissionClass::TrackingRelevant;
  return PermissionClass::Unknown;
}

std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Activity: return "activity";
    case ComponentKind::Service: return "service";
    case ComponentKind::Receiver: return "receiver";
    case ComponentKind::Provider: return "provider";
  }
  return "activity";
}

ComponentKind component_kind_from(std::string_view s) {
  if (s == "service") return ComponentKind::Service;
  if (s == "receiver") return ComponentKind::Receiver;
  if (s == "provider") return ComponentKind::Provider;
  return ComponentKind::Activity;
}

std::string_view to_string(ExportedSource s) {
  switch (s) {
    case ExportedSource::Explicit: return "explicit";
    case ExportedSource::ImpliedByIntentFilter: return "implied-by-intent-filter";
    case ExportedSource::Default: return "default";
  }
  return "default";
}

ExportedSource exported_source_from(std::string_view s) {
  if (s == "explicit") return ExportedSource::Explicit;
  if (s == "implied-by-intent-filter") return ExportedSource::ImpliedByIntentFilter;
  return ExportedSource::Default;
}

std::string_view to_string(BackupSetting b) {
  switch (b) {
    case BackupSetting::ExplicitTrue: return "true";
    case BackupSetting::ExplicitFalse: return "false";
    case BackupSetting::DefaultUnset: return "default-unset";
  }
  return "default-unset";
}

BackupSetting backup_setting_from(std::string_view s) {
  if (s == "true") return BackupSetting::ExplicitTrue;
  if (s == "false") return BackupSetting::ExplicitFalse;
  return BackupSetting::DefaultUnset;
}

std::string_view to_string(CleartextSetting c) {
  switch (c) {
    case CleartextSetting::ExplicitTrue: return "explicit-true";
    case CleartextSetting::ExplicitFalse: return "explicit-false";
    case CleartextSetting::Default: return "default";
  }
  return "default";
}

CleartextSetting cleartext_setting_from(std::string_view s) {
  if (s == "explicit-true") return CleartextSetting::ExplicitTrue;
  if (s == "explicit-false") return CleartextSetting::ExplicitFalse;
  return CleartextSetting::Default;
}

std::string_view to_string(NscCleartext n) {
  switch (n) {
    case NscCleartext::True: return "true";
    case NscCleartext::False: return "false";
    case NscCleartext::Unresolved: return "unresolved";
  }
  return "unresolved";
}

NscCleartext nsc_cleartext_from(std::string_view s) {
  if (s == "true") return NscCleartext::True;
  if (s == "false") return NscCleartext::False;
  return NscCleartext::Unresolved;
}

std::string_view to_string(SdkCategory c) {
  switch (c) {
    case SdkCategory::Analytics: return "analytics";
    case SdkCategory::Advertising: return "advertising";
    case SdkCategory::Attribution: return "attribution";
  }
  return "analytics";
}

SdkCategory sdk_category_from(std::string_view s) {
  if (s == "advertising") return SdkCategory::Advertising;
  if (s == "attribution") return SdkCategory::Attribution;
  return SdkCategory::Analytics;
}

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::PackagePrefix: return "package-prefix";
    case MatchKind::MetadataKey: return "metadata-key";
    case MatchKind::ComponentClass: return "component-class";
    case MatchKind::PermissionName: return "permission-name";
  }
  return "package-prefix";
}

MatchKind match_kind_from(std::string_view s) {
  if (s == "metadata-key") return MatchKind::MetadataKey;
  if (s == "component-class") return MatchKind::ComponentClass;
  if (s == "permission-name") return MatchKind::PermissionName;
  return MatchKind::PackagePrefix;
}

std::string_view to_string(EvidenceSource e) {
  switch (e) {
    case EvidenceSource::ManifestMetadata: return "manifest-metadata";
    case EvidenceSource::ManifestComponent: return "manifest-component";
    case EvidenceSource::ManifestPermission: return "manifest-permission";
    case EvidenceSource::DexString: return "dex-string";
  }
  return "manifest-metadata";
}

EvidenceSource evidence_source_from(std::string_view s) {
  if (s == "manifest-component") return EvidenceSource::ManifestComponent;
  if (s == "manifest-permission") return EvidenceSource::ManifestPermission;
  if (s == "dex-string") return EvidenceSource::DexString;
  return EvidenceSource::ManifestMetadata;
}

RiskLevel risk_level_from(std::string_view s) {
  if (s == "high") return RiskLevel::High;
  if (s == "medium") return RiskLevel::Medium;
  return RiskLevel::Low;
}

json facts_to_json(const ManifestFacts& facts) {
  json permissions = json::array();
  for (const auto& p : facts.permissions)
    permissions.push_back({{"name", p.name},
                           {"classification", to_string(p.classification)}});
  json components = json::array();
  for (const auto& c : facts.components)
    components.push_back({{"kind", to_string(c.kind)},
                          {"name", c.name},
                          {"exported_effective", c.exported_effective},
                          {"exported_source", to_string(c.exported_source)},
                          {"has_intent_filter", c.has_intent_filter},
                          {"protected_by_permission", c.protected_by_permission},
                          {"deep_link", c.deep_link},
                          {"install_referrer", c.install_referrer},
                          {"launcher", c.launcher}});
  json metadata = json::array();
  for (const auto& [name, value] : facts.metadata_keys)
    metadata.push_back({{"name", name}, {"value", value}});

  json out{
      {"package_id", facts.package_id},
      {"target_sdk",
       facts.target_sdk ? json(*facts.target_sdk) : json(nullptr)},
      {"permissions", permissions},
      {"allow_backup", to_string(facts.allow_backup)},
      {"backup_agent_declared", facts.backup_agent_declared},
      {"restore_any_version", facts.restore_any_version},
      {"full_backup_content_declared", facts.full_backup_content_declared},
      {"data_extraction_rules_declared", facts.data_extraction_rules_declared},
      {"cleartext_traffic", to_string(facts.cleartext_traffic)},
      {"nsc_reference", facts.nsc_reference},
      {"nsc_permits_cleartext", to_string(facts.nsc_permits_cleartext)},
      {"components", components},
      {"metadata_keys", metadata},
      {"warnings", facts.warnings},
  };
  return out;
}

ManifestFacts facts_from_json(const json& j) {
  ManifestFacts facts;
  facts.package_id = j.at("package_id").get<std::string>();
  if (!j.at("target_sdk").is_null())
    facts.target_sdk = j.at("target_sdk").get<int>();
  for (const auto& p : j.at("permissions"))
    facts.permissions.push_back(PermissionRecord{
        p.at("name").get<std::string>(),
        permission_class_from(p.at("classification").get<std::string>())});
  facts.allow_backup =
      backup_setting_from(j.at("allow_backup").get<std::string>());
  facts.backup_agent_declared = j.at("backup_agent_declared").get<bool>();
  facts.restore_any_version = j.at("restore_any_version").get<bool>();
  facts.full_backup_content_declared =
      j.at("full_backup_content_declared").get<bool>();
  facts.data_extraction_rules_declared =
      j.at("data_extraction_rules_declared").get<bool>();
  facts.cleartext_traffic =
      cleartext_setting_from(j.at("cleartext_traffic").get<std::string>());
  facts.nsc_reference = j.at("nsc_reference").get<bool>();
  facts.nsc_permits_cleartext =
      nsc_cleartext_from(j.at("nsc_permits_cleartext").get<std::string>());
  for (const auto& c : j.at("components")) {
    ComponentRecord component;
    component.kind = component_kind_from(c.at("kind").get<std::string>());
    component.name = c.at("name").get<std::string>();
    component.exported_effective = c.at("exported_effective").get<bool>();
    component.exported_source =
        exported_source_from(c.at("exported_source").get<std::string>());
    component.has_intent_filter = c.at("has_intent_filter").get<bool>();
    component.protected_by_permission =
        c.at("protected_by_permission").get<bool>();
    component.deep_link = c.at("deep_link").get<bool>();
    component.install_referrer = c.at("install_referrer").get<bool>();
    component.launcher = c.at("launcher").get<bool>();
    facts.components.push_back(std::move(component));
  }
  for (const auto& m : j.at("metadata_keys"))
    facts.metadata_keys.emplace_back(m.at("name").get<std::string>(),
                                     m.at("value").get<std::string>());
  facts.warnings = j.at("warnings").get<std::vector<std::string>>();
  return facts;
}

json vector_to_json(const IndicatorVector& v) {
  return json{
      {"cleartext_strong", v.cleartext_strong},
      {"backup_enabled", v.backup_enabled},
      {"backup_explicit", v.backup_explicit},
      {"tracking_present", v.tracking_present},
      {"ad_attrib_vendor_count", v.ad_attrib_vendor_count},
      {"sensitive_permission_count", v.sensitive_permission_count},
      {"exported_unprotected_count", v.exported_unprotected_count},
  };
}

IndicatorVector vector_from_json(const json& j) {
  IndicatorVector v;
  v.cleartext_strong = j.at("cleartext_strong").get<bool>();
  v.backup_enabled = j.at("backup_enabled").get<bool>();
  v.backup_explicit = j.at("backup_explicit").get<bool>();
  v.tracking_present = j.at("tracking_present").get<bool>();
  v.ad_attrib_vendor_count = j.at("ad_attrib_vendor_count").get<int>();
  v.sensitive_permission_count = j.at("sensitive_permission_count").get<int>();
  v.exported_unprotected_count = j.at("exported_unprotected_count").get<int>();
  return v;
}

json app_to_json(const AppAnalysis& app) {
  json hits = json::array();
  for (const auto& hit : app.sdk_hits) {
    json evidence{{"source", to_string(hit.source)}, {"matched", hit.matched}};
    if (hit.source == EvidenceSource::DexString)
      evidence["dex_name"] = hit.dex_name;
    hits.push_back({{"vendor", hit.signature.vendor},
                    {"category", to_string(hit.signature.category)},
                    {"match_kind", to_string(hit.signature.match_kind)},
                    {"pattern", hit.signature.pattern},
                    {"evidence", evidence}});
  }
  json rules = json::array();
  for (const auto& rule : app.risk.fired_rules)
    rules.push_back({{"id", rule.id}, {"justification", rule.justification}});

  return json{
      {"app_id", app.app_id},
      {"package", app.package},
      {"facts", facts_to_json(app.facts)},
      {"sdk_hits", hits},
      {"indicator_vector", vector_to_json(app.indicator_vector)},
      {"risk", json{{"level", to_string(app.risk.level)},
                    {"fired_rules", rules}}},
      {"warnings", app.warnings},
      {"fingerprint_coverage", app.fingerprint_coverage},
      {"signature_db_version", app.signature_db_version},
  };
}

AppAnalysis app_from_json(const json& j) {
  AppAnalysis app;
  app.app_id = j.at("app_id").get<std::string>();
  app.package = j.at("package").get<std::string>();
  app.facts = facts_from_json(j.at("facts"));
  for (const auto& h : j.at("sdk_hits")) {
    SdkHit hit;
    hit.signature.vendor = h.at("vendor").get<std::string>();
    hit.signature.category =
        sdk_category_from(h.at("category").get<std::string>());
    hit.signature.match_kind =
        match_kind_from(h.at("match_kind").get<std::string>());
    hit.signature.pattern = h.at("pattern").get<std::string>();
    const auto& evidence = h.at("evidence");
    hit.source = evidence_source_from(evidence.at("source").get<std::string>());
    hit.matched = evidence.at("matched").get<std::string>();
    if (evidence.contains("dex_name"))
      hit.dex_name = evidence.at("dex_name").get<std::string>();
    app.sdk_hits.push_back(std::move(hit));
  }
  app.indicator_vector = vector_from_json(j.at("indicator_vector"));
  app.risk.app_id = app.app_id;
  app.risk.vector = app.indicator_vector;
  app.risk.level = risk_level_from(j.at("risk").at("level").get<std::string>());
  for (const auto& r : j.at("risk").at("fired_rules"))
    app.risk.fired_rules.push_back(
        FiredRule{r.at("id").get<std::string>(),
                  r.at("justification").get<std::string>()});
  app.warnings = j.at("warnings").get<std::vector<std::string>>();
  app.fingerprint_coverage = j.at("fingerprint_coverage").get<std::string>();
  app.signature_db_version =
      j.value("signature_db_version", std::string());
  return app;
}

json aggregates_to_json(const CohortAggregates& agg) {
  return json{
      {"counts",
       json{{"high", agg.high}, {"medium", agg.medium}, {"low", agg.low}}},
      {"permission_prevalence", agg.permission_prevalence},
      {"indicator_prevalence", agg.indicator_prevalence},
      {"sdk_category_prevalence", agg.sdk_category_prevalence},
  };
}

CohortAggregates aggregates_from_json(const json& j) {
  CohortAggregates agg;
  agg.high = j.at("counts").at("high").get<int>();
  agg.medium = j.at("counts").at("medium").get<int>();
  agg.low = j.at("counts").at("low").get<int>();
  agg.permission_prevalence =
      j.at("permission_prevalence").get<std::map<std::string, int>>();
  agg.indicator_prevalence =
      j.at("indicator_prevalence").get<std::map<std::string, int>>();
  agg.sdk_category_prevalence =
      j.at("sdk_category_prevalence").get<std::map<std::string, int>>();
  return agg;
}

std::string dump(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void add_observation(CohortAggregates& agg, const RiskAssessment& assessment,
                     const ManifestFacts& facts,
                     const std::vector<SdkHit>& hits) {
  switch (assessment.level) {
    case RiskLevel::High: ++agg.high; break;
    case RiskLevel::Medium: ++agg.medium; break;
    case RiskLevel::Low: ++agg.low; break;
  }

  std::set<std::string> distinct_permissions;
  for (const auto& p : facts.permissions) distinct_permissions.insert(p.name);
  for (const auto& name : distinct_permissions)
    ++agg.permission_prevalence[name];

  const IndicatorVector& v = assessment.vector;
  auto mark = [&agg](const char* key, bool present) {
    agg.indicator_prevalence.try_emplace(key, 0);
    if (present) ++agg.indicator_prevalence[key];
  };
  mark("cleartext_strong", v.cleartext_strong);
  mark("backup_enabled", v.backup_enabled);
  mark("backup_explicit", v.backup_explicit);
  mark("tracking_present", v.tracking_present);
  mark("ad_attrib_vendors", v.ad_attrib_vendor_count > 0);
  mark("sensitive_permissions", v.sensitive_permission_count > 0);
  mark("exported_unprotected", v.exported_unprotected_count > 0);

  std::set<std::string_view> categories;
  for (const auto& hit : hits) categories.insert(to_string(hit.signature.category));
  for (auto key : {"analytics", "advertising", "attribution"}) {
    agg.sdk_category_prevalence.try_emplace(key, 0);
    if (categories.count(key)) ++agg.sdk_category_prevalence[key];
  }
}

std::string render_markdown(const CohortReport& report) {
  std::ostringstream out;
  out << "# Privacy risk report\n\n";
  out << "analyzer " << report.analyzer_version;
  if (!report.signature_db_version.empty())
    out << ", signature db " << report.signature_db_version;
  out << "\n\n";

  out << "## Risk distribution\n\n";
  out << "| Risk assessment | High risk | Medium risk | Low risk | Total |\n";
  out << "| --- | ---: | ---: | ---: | ---: |\n";
  for (const auto& [label, agg] : report.per_cohort)
    out << "| " << label << " | " << agg.high << " | " << agg.medium << " | "
        << agg.low << " | " << agg.app_count() << " |\n";
  const auto& t = report.totals;
  out << "| Total | " << t.high << " | " << t.medium << " | " << t.low
      << " | " << t.app_count() << " |\n";

  auto prevalence_section = [&](const char* title,
                                std::map<std::string, int>
                                    CohortAggregates::*field) {
    // Row universe comes from the totals so every cohort column aligns.
    if ((report.totals.*field).empty()) return;
    out << "\n## " << title << "\n\n| |";
    for (const auto& [label, agg] : report.per_cohort) out << " " << label << " |";
    out << " Total |\n| --- |";
    for (size_t i = 0; i < report.per_cohort.size(); ++i) out << " ---: |";
    out << " ---: |\n";
    for (const auto& [key, total] : report.totals.*field) {
      out << "| " << key << " |";
      for (const auto& [label, agg] : report.per_cohort) {
        auto it = (agg.*field).find(key);
        out << " " << (it == (agg.*field).end() ? 0 : it->second) << " |";
      }
      out << " " << total << " |\n";
    }
  };
  prevalence_section("Permission prevalence",
                     &CohortAggregates::permission_prevalence);
  prevalence_section("Indicator prevalence",
                     &CohortAggregates::indicator_prevalence);
  prevalence_section("SDK category prevalence",
                     &CohortAggregates::sdk_category_prevalence);
  return out.str();
}

std::string render_csv(const CohortReport& report) {
  std::ostringstream out;
  out << "section,cohort,key,value\n";
  auto emit = [&out](const std::string& section, const std::string& cohort,
                     const std::string& key, int value) {
    out << csv_escape(section) << ',' << csv_escape(cohort) << ','
        << csv_escape(key) << ',' << value << "\n";
  };
  auto emit_aggregates = [&](const std::string& cohort,
                             const CohortAggregates& agg) {
    emit("counts", cohort, "high", agg.high);
    emit("counts", cohort, "medium", agg.medium);
    emit("counts", cohort, "low", agg.low);
    emit("counts", cohort, "total", agg.app_count());
    for (const auto& [key, n] : agg.permission_prevalence)
      emit("permission_prevalence", cohort, key, n);
    for (const auto& [key, n] : agg.indicator_prevalence)
      emit("indicator_prevalence", cohort, key, n);
    for (const auto& [key, n] : agg.sdk_category_prevalence)
      emit("sdk_category_prevalence", cohort, key, n);
  };
  for (const auto& [label, agg] : report.per_cohort)
    emit_aggregates(label, agg);
  // The empty cohort column denotes the grand totals.
  emit_aggregates("", report.totals);
  return out.str();
}

}  // namespace

CohortLabeling CohortLabeling::parse_csv(std::string_view text,
                                         const std::string& origin) {
  CohortLabeling labeling;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ReportError(ReportError::Kind::MalformedLabeling,
                        origin + ":" + std::to_string(lineno) +
                            ": expected `app_id,cohort`");
    std::string app_id = line.substr(0, comma);
    std::string cohort = line.substr(comma + 1);
    if (!header_seen) {
      header_seen = true;
      if (app_id == "app_id" && cohort == "cohort") continue;
      throw ReportError(ReportError::Kind::MalformedLabeling,
                        origin + ": missing `app_id,cohort` header");
    }
    if (app_id.empty() || cohort.empty())
      throw ReportError(ReportError::Kind::MalformedLabeling,
                        origin + ":" + std::to_string(lineno) +
                            ": empty app_id or cohort");
    labeling.assignments[app_id] = cohort;
  }
  return labeling;
}

CohortReport aggregate(std::span<const RiskAssessment> assessments,
                       std::span<const ManifestFacts> facts,
                       std::span<const std::vector<SdkHit>> hits,
                       const CohortLabeling& labeling) {
  if (assessments.size() != facts.size() || assessments.size() != hits.size())
    throw ReportError(ReportError::Kind::MisalignedInputs,
                      "assessments/facts/hits lists differ in length");
  std::set<std::string> seen_ids;
  CohortReport report;
  report.analyzer_version = std::string(kAnalyzerVersion);

  for (size_t i = 0; i < assessments.size(); ++i) {
    const std::string& app_id = assessments[i].app_id;
    if (!seen_ids.insert(app_id).second)
      throw ReportError(ReportError::Kind::DuplicateAppId,
                        "duplicate app_id: " + app_id);
    auto labeled = labeling.assignments.find(app_id);
    const std::string cohort = labeled == labeling.assignments.end()
                                   ? std::string("unlabeled")
                                   : labeled->second;
    add_observation(report.per_cohort[cohort], assessments[i], facts[i],
                    hits[i]);
    add_observation(report.totals, assessments[i], facts[i], hits[i]);
  }
  return report;
}

CohortReport aggregate(std::span<const AppAnalysis> apps,
                       const CohortLabeling& labeling) {
  std::vector<RiskAssessment> assessments;
  std::vector<ManifestFacts> facts;
  std::vector<std::vector<SdkHit>> hits;
  assessments.reserve(apps.size());
  for (const auto& app : apps) {
    RiskAssessment assessment = app.risk;
    assessment.app_id = app.app_id;
    assessment.vector = app.indicator_vector;
    assessments.push_back(std::move(assessment));
    facts.push_back(app.facts);
    hits.push_back(app.sdk_hits);
  }
  CohortReport report = aggregate(assessments, facts, hits, labeling);
  for (const auto& app : apps) {
    if (report.signature_db_version.empty()) {
      report.signature_db_version = app.signature_db_version;
    } else if (!app.signature_db_version.empty() &&
               app.signature_db_version != report.signature_db_version) {
      report.signature_db_version = "mixed";
      break;
    }
  }
  return report;
}

std::string render(const CohortReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: {
      json cohorts = json::object();
      for (const auto& [label, agg] : report.per_cohort)
        cohorts[label] = aggregates_to_json(agg);
      return dump(json{{"cohorts", cohorts},
                       {"totals", aggregates_to_json(report.totals)},
                       {"analyzer_version", report.analyzer_version},
                       {"signature_db_version", report.signature_db_version}});
    }
    case ReportFormat::Csv:
      return render_csv(report);
    case ReportFormat::Markdown:
      return render_markdown(report);
  }
  return {};
}

CohortReport cohort_report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    CohortReport report;
    for (const auto& [label, agg] : j.at("cohorts").items())
      report.per_cohort[label] = aggregates_from_json(agg);
    report.totals = aggregates_from_json(j.at("totals"));
    report.analyzer_version = j.at("analyzer_version").get<std::string>();
    report.signature_db_version =
        j.at("signature_db_version").get<std::string>();
    return report;
  } catch (const json::exception& e) {
    throw ReportError(ReportError::Kind::MalformedReport,
                      std::string("cohort report JSON: ") + e.what());
  }
}

std::string render_app_report(const AppAnalysis& app, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return dump(app_to_json(app));
    case ReportFormat::Csv: {
      std::ostringstream out;
      out << "key,value\n";
      auto emit = [&out](const std::string& key, const std::string& value) {
        out << csv_escape(key) << ',' << csv_escape(value) << "\n";
      };
      emit("app_id", app.app_id);
      emit("package", app.package);
      emit("risk_level", std::string(to_string(app.risk.level)));
      for (const auto& rule : app.risk.fired_rules)
        emit("fired_rule", rule.id + ": " + rule.justification);
      emit("allow_backup", std::string(to_string(app.facts.allow_backup)));
      emit("cleartext_traffic",
           std::string(to_string(app.facts.cleartext_traffic)));
      emit("nsc_permits_cleartext",
           std::string(to_string(app.facts.nsc_permits_cleartext)));
      emit("sensitive_permission_count",
           std::to_string(app.indicator_vector.sensitive_permission_count));
      emit("exported_unprotected_count",
           std::to_string(app.indicator_vector.exported_unprotected_count));
      for (const auto& hit : app.sdk_hits)
        emit("sdk_hit", hit.signature.vendor + " (" +
                            std::string(to_string(hit.signature.category)) +
                            ") via " + std::string(to_string(hit.source)) +
                            ": " + hit.matched);
      emit("fingerprint_coverage", app.fingerprint_coverage);
      for (const auto& warning : app.warnings) emit("warning", warning);
      return out.str();
    }
    case ReportFormat::Markdown: {
      std::ostringstream out;
      out << "# " << app.app_id << "\n\n";
      out << "- package: " << app.package << "\n";
      out << "- risk level: **" << to_string(app.risk.level) << "**\n";
      for (const auto& rule : app.risk.fired_rules)
        out << "  - " << rule.id << ": " << rule.justification << "\n";
      out << "- permissions: " << app.facts.permissions.size() << " ("
          << app.indicator_vector.sensitive_permission_count
          << " sensitive)\n";
      out << "- allow_backup: " << to_string(app.facts.allow_backup) << "\n";
      out << "- cleartext_traffic: " << to_string(app.facts.cleartext_traffic)
          << ", nsc: "
          << (app.facts.nsc_reference ? "referenced" : "absent") << " ("
          << to_string(app.facts.nsc_permits_cleartext) << ")\n";
      out << "- exported unprotected non-launcher components: "
          << app.indicator_vector.exported_unprotected_count << "\n";
      if (app.sdk_hits.empty()) {
        out << "- sdk hits: none\n";
      } else {
        out << "- sdk hits:\n";
        for (const auto& hit : app.sdk_hits)
          out << "  - " << hit.signature.vendor << " ("
              << to_string(hit.signature.category) << ") via "
              << to_string(hit.source) << ": `" << hit.matched << "`\n";
      }
      out << "- fingerprint coverage: " << app.fingerprint_coverage << "\n";
      if (!app.warnings.empty()) {
        out << "- warnings:\n";
        for (const auto& warning : app.warnings)
          out << "  - " << warning << "\n";
      }
      return out.str();
    }
  }
  return {};
}

std::string render_app_report_line(const AppAnalysis& app) {
  return app_to_json(app).dump(-1, ' ', false,
                               json::error_handler_t::replace) +
         "\n";
}

AppAnalysis app_report_from_json(std::string_view text) {
  try {
    return app_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ReportError(ReportError::Kind::MalformedReport,
                      std::string("per-app report JSON: ") + e.what());
  }
}

std::string render_error_record(const std::string& app_id,
                                const std::string& path,
                                const std::string& kind,
                                const std::string& message) {
  return dump(json{{"app_id", app_id},
                   {"path", path},
                   {"error", json{{"kind", kind}, {"message", message}}}});
}

bool is_error_record(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  return j.is_object() && j.contains("error");
}

std::string error_kind(const Error& error) {
  if (const auto* e = dynamic_cast<const ZipError*>(&error)) {
    switch (e->kind()) {
      case ZipError::Kind::NotAZip: return "zip:NotAZip";
      case ZipError::Kind::TruncatedArchive: return "zip:TruncatedArchive";
      case ZipError::Kind::UnsupportedCompressionMethod:
        return "zip:UnsupportedCompressionMethod";
      case ZipError::Kind::UnsupportedArchiveFeature:
        return "zip:UnsupportedArchiveFeature";
      case ZipError::Kind::BadEntryName: return "zip:BadEntryName";
      case ZipError::Kind::EntryNotFound: return "zip:EntryNotFound";
      case ZipError::Kind::CorruptEntry: return "zip:CorruptEntry";
    }
  }
  if (const auto* e = dynamic_cast<const AxmlError*>(&error)) {
    switch (e->kind()) {
      case AxmlError::Kind::NotBinaryXml: return "axml:NotBinaryXml";
      case AxmlError::Kind::MalformedChunk: return "axml:MalformedChunk";
      case AxmlError::Kind::DanglingStringIndex:
        return "axml:DanglingStringIndex";
    }
  }
  if (const auto* e = dynamic_cast<const DexError*>(&error)) {
    switch (e->kind()) {
      case DexError::Kind::NotADex: return "dex:NotADex";
      case DexError::Kind::TruncatedDex: return "dex:TruncatedDex";
      case DexError::Kind::BadStringOffset: return "dex:BadStringOffset";
    }
  }
  if (dynamic_cast<const ManifestError*>(&error)) return "manifest:NotAManifest";
  if (const auto* e = dynamic_cast<const SignatureError*>(&error)) {
    return e->kind() == SignatureError::Kind::DuplicateSignature
               ? "signatures:DuplicateSignature"
               : "signatures:MalformedSignatureFile";
  }
  if (dynamic_cast<const PolicyError*>(&error)) return "policy:Malformed";
  if (const auto* e = dynamic_cast<const ReportError*>(&error)) {
    switch (e->kind()) {
      case ReportError::Kind::DuplicateAppId: return "report:DuplicateAppId";
      case ReportError::Kind::MisalignedInputs: return "report:MisalignedInputs";
      case ReportError::Kind::MissingLabeling: return "report:MissingLabeling";
      case ReportError::Kind::MalformedLabeling: return "report:MalformedLabeling";
      case ReportError::Kind::MalformedReport: return "report:MalformedReport";
    }
  }
  return "error";
}

}  // namespace manifestscope
