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

#include <filesystem>
#include <string>

#include "manifestscope/fingerprints.hpp"
#include "manifestscope/report.hpp"
#include "manifestscope/risk.hpp"

namespace manifestscope {

struct AnalyzeOptions {
  const SignatureDb* signature_db = nullptr;           // default: bundled
  const PermissionClassifier* classifier = nullptr;    // default: bundled
  RiskPolicy policy;
};

// Full pipeline for one APK: container -> manifest decode -> facts ->
// DEX string scan -> fingerprint match -> indicator vector -> assessment.
// Parser errors propagate as the typed errors of the failing stage.
AppAnalysis analyze_apk(const std::filesystem::path& apk_path,
                        const AnalyzeOptions& options = {});

}  // namespace manifestscope
