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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "manifestscope/errors.hpp"
#include "manifestscope/fingerprints.hpp"
#include "manifestscope/manifest.hpp"
#include "manifestscope/risk.hpp"

namespace manifestscope {

// One app's complete analysis result: the unit of the per-app report JSON.
struct AppAnalysis {
  std::string app_id;   // package id, or AppN when anonymized
  std::string package;
  ManifestFacts facts;
  std::vector<SdkHit> sdk_hits;
  IndicatorVector indicator_vector;
  RiskAssessment risk;
  std::vector<std::string> warnings;
  // "full" when DEX prefixes matched at least one known root, otherwise
  // "manifest-only" (obfuscation caveat).
  std::string fingerprint_coverage = "full";
  std::string signature_db_version;
};

// app_id -> cohort label. Apps without an assignment fall into the implicit
// "unlabeled" cohort during aggregation.
struct CohortLabeling {
  std::map<std::string, std::string> assignments;

  // CSV with header `app_id,cohort`. Throws ReportError::MalformedLabeling.
  static CohortLabeling parse_csv(std::string_view text,
                                  const std::string& origin);
};

struct CohortAggregates {
  int high = 0;
  int medium = 0;
  int low = 0;
  std::map<std::string, int> permission_prevalence;
  std::map<std::string, int> indicator_prevalence;
  std::map<std::string, int> sdk_category_prevalence;

  int app_count() const { return high + medium + low; }
};

struct CohortReport {
  std::map<std::string, CohortAggregates> per_cohort;
  CohortAggregates totals;
  std::string analyzer_version;
  std::string signature_db_version;
};

enum class ReportFormat {
  Json,
  Csv,
  Markdown,
};

// Aggregates index-aligned per-app results into the comparative report.
// Throws ReportError: DuplicateAppId, MisalignedInputs.
CohortReport aggregate(std::span<const RiskAssessment> assessments,
                       std::span<const ManifestFacts> facts,
                       std::span<const std::vector<SdkHit>> hits,
                       const CohortLabeling& labeling);

CohortReport aggregate(std::span<const AppAnalysis> apps,
                       const CohortLabeling& labeling);

// Serialization. JSON is the canonical machine format and round-trips;
// markdown reproduces the risk-distribution table layout.
std::string render(const CohortReport& report, ReportFormat format);
CohortReport cohort_report_from_json(std::string_view text);

std::string render_app_report(const AppAnalysis& app, ReportFormat format);
// Compact single-line JSON (stream-friendly), same canonical content.
std::string render_app_report_line(const AppAnalysis& app);
AppAnalysis app_report_from_json(std::string_view text);

// Short machine tag for a typed analyzer error, e.g. "zip:CorruptEntry".
std::string error_kind(const Error& error);

// Error record emitted when an APK cannot be analyzed (shares the report
// stream/directory with regular reports; `error` key marks it).
std::string render_error_record(const std::string& app_id,
                                const std::string& path,
                                const std::string& kind,
                                const std::string& message);
bool is_error_record(std::string_view json_text);

}  // namespace manifestscope
