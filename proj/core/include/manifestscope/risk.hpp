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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manifestscope/errors.hpp"
#include "manifestscope/fingerprints.hpp"
#include "manifestscope/manifest.hpp"

namespace manifestscope {

// Per-app boolean/count signals feeding the rubric.
struct IndicatorVector {
  bool cleartext_strong = false;  // explicit-true or NSC permits cleartext
  bool backup_enabled = false;
  bool backup_explicit = false;
  bool tracking_present = false;
  int ad_attrib_vendor_count = 0;      // distinct advertising/attribution vendors
  int sensitive_permission_count = 0;
  int exported_unprotected_count = 0;  // exported, unprotected, non-launcher

  friend bool operator==(const IndicatorVector&,
                         const IndicatorVector&) = default;
};

// Rubric thresholds, overridable via a key=value policy file.
struct RiskPolicy {
  int extensive_vendor_min = 2;
  int strong_cooccur_min = 3;
  int exported_strong_min = 2;

  // Throws PolicyError on malformed lines or unknown keys.
  static RiskPolicy parse(std::string_view text, const std::string& origin);
};

enum class RiskLevel {
  Low,
  Medium,
  High,
};

struct FiredRule {
  std::string id;  // R1..R3, M1..M5, L1
  std::string justification;
};

struct RiskAssessment {
  std::string app_id;
  IndicatorVector vector;
  RiskLevel level = RiskLevel::Low;
  std::vector<FiredRule> fired_rules;
};

// Deterministic tiered rubric; first tier with a fired rule decides.
//   HIGH   R1 cleartext_strong AND tracking_present
//          R2 ad_attrib_vendor_count >= extensive_vendor_min
//          R3 >= strong_cooccur_min of {cleartext_strong, tracking_present,
//             explicit backup enablement, exported_unprotected_count >=
//             exported_strong_min}
//   MEDIUM M1 tracking_present, M2 backup_enabled, M3 cleartext_strong,
//          M4 sensitive_permission_count >= 1,
//          M5 exported_unprotected_count >= 1
//   LOW    otherwise (rule L1, "no indicators").
// fired_rules lists every satisfied rule, high tier first.
RiskAssessment assess(const IndicatorVector& vector,
                      const RiskPolicy& policy = {});

// Derives the vector from extracted facts and fingerprint hits.
IndicatorVector build_indicator_vector(const ManifestFacts& facts,
                                       std::span<const SdkHit> hits);

std::string_view to_string(RiskLevel level);

}  // namespace manifestscope
