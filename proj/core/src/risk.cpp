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

#include "manifestscope/risk.hpp"

#include <charconv>
#include <set>

namespace manifestscope {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

int count_strong(const IndicatorVector& v, const RiskPolicy& policy) {
  int strong = 0;
  if (v.cleartext_strong) ++strong;
  if (v.tracking_present) ++strong;
  if (v.backup_explicit && v.backup_enabled) ++strong;
  if (v.exported_unprotected_count >= policy.exported_strong_min) ++strong;
  return strong;
}

}  // namespace

RiskPolicy RiskPolicy::parse(std::string_view text, const std::string& origin) {
  RiskPolicy policy;
  size_t lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw PolicyError(origin + ":" + std::to_string(lineno) +
                        ": expected key=value");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    int parsed = 0;
    auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc() || ptr != value.data() + value.size() || parsed < 1)
      throw PolicyError(origin + ":" + std::to_string(lineno) +
                        ": value for '" + std::string(key) +
                        "' must be a positive integer");
    if (key == "extensive_vendor_min") {
      policy.extensive_vendor_min = parsed;
    } else if (key == "strong_cooccur_min") {
      policy.strong_cooccur_min = parsed;
    } else if (key == "exported_strong_min") {
      policy.exported_strong_min = parsed;
    } else {
      throw PolicyError(origin + ":" + std::to_string(lineno) +
                        ": unknown policy key '" + std::string(key) + "'");
    }
  }
  return policy;
}

RiskAssessment assess(const IndicatorVector& v, const RiskPolicy& policy) {
  RiskAssessment out;
  out.vector = v;

  // HIGH tier.
  if (v.cleartext_strong && v.tracking_present)
    out.fired_rules.push_back(
        {"R1", "cleartext traffic allowed while tracking/analytics SDK "
               "signals are present"});
  if (v.ad_attrib_vendor_count >= policy.extensive_vendor_min)
    out.fired_rules.push_back(
        {"R2", "extensive advertising/attribution stack: " +
                   std::to_string(v.ad_attrib_vendor_count) +
                   " distinct vendors (threshold " +
                   std::to_string(policy.extensive_vendor_min) + ")"});
  int strong = count_strong(v, policy);
  if (strong >= policy.strong_cooccur_min)
    out.fired_rules.push_back(
        {"R3", std::to_string(strong) +
                   " strong indicators co-occur (threshold " +
                   std::to_string(policy.strong_cooccur_min) + ")"});
  bool high = !out.fired_rules.empty();

  // MEDIUM tier; rules are still reported when a high rule already fired so
  // the trace stays complete.
  size_t high_rules = out.fired_rules.size();
  if (v.tracking_present)
    out.fired_rules.push_back(
        {"M1", "tracking/analytics SDK or tracking-relevant permission "
               "present"});
  if (v.backup_enabled)
    out.fired_rules.push_back(
        {"M2", v.backup_explicit ? std::string("backup explicitly enabled")
                                 : std::string("backup enabled implicitly "
                                               "(platform default)")});
  if (v.cleartext_strong)
    out.fired_rules.push_back({"M3", "cleartext traffic allowed"});
  if (v.sensitive_permission_count >= 1)
    out.fired_rules.push_back(
        {"M4", std::to_string(v.sensitive_permission_count) +
                   " sensitive permission(s) requested"});
  if (v.exported_unprotected_count >= 1)
    out.fired_rules.push_back(
        {"M5", std::to_string(v.exported_unprotected_count) +
                   " exported component(s) without permission protection"});

  if (high) {
    out.level = RiskLevel::High;
  } else if (out.fired_rules.size() > high_rules) {
    out.level = RiskLevel::Medium;
  } else {
    out.level = RiskLevel::Low;
    out.fired_rules.push_back(
        {"L1", "no configuration, tracking, or exposure indicators"});
  }
  return out;
}

IndicatorVector build_indicator_vector(const ManifestFacts& facts,
                                       std::span<const SdkHit> hits) {
  IndicatorVector v;
  v.cleartext_strong =
      facts.cleartext_traffic == CleartextSetting::ExplicitTrue ||
      facts.nsc_permits_cleartext == NscCleartext::True;
  v.backup_enabled = facts.backup_effectively_enabled();
  v.backup_explicit = facts.backup_explicit();
  v.tracking_present = !hits.empty() || facts.has_tracking_relevant_permission();
  std::set<std::string_view> ad_attrib_vendors;
  for (const auto& hit : hits)
    if (hit.signature.category == SdkCategory::Advertising ||
        hit.signature.category == SdkCategory::Attribution)
      ad_attrib_vendors.insert(hit.signature.vendor);
  v.ad_attrib_vendor_count = static_cast<int>(ad_attrib_vendors.size());
  v.sensitive_permission_count = facts.sensitive_permission_count();
  v.exported_unprotected_count = facts.exported_unprotected_nonlauncher();
  return v;
}

std::string_view to_string(RiskLevel level) {
  switch (level) {
    case RiskLevel::Low:
      return "low";
    case RiskLevel::Medium:
      return "medium";
    case RiskLevel::High:
      return "high";
  }
  return "low";
}

}  // namespace manifestscope
