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

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "manifestscope/analyzer.hpp"
#include "manifestscope/errors.hpp"
#include "manifestscope/fingerprints.hpp"
#include "manifestscope/report.hpp"
#include "manifestscope/risk.hpp"
#include "manifestscope/version.hpp"

namespace fs = std::filesystem;
namespace ms = manifestscope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartialFailure = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ms::Error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ms::ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ms::ReportFormat::Json;
  if (name == "csv") return ms::ReportFormat::Csv;
  return ms::ReportFormat::Markdown;
}

// --db flag, then MANIFESTSCOPE_DB, then the compiled-in default.
ms::SignatureDb load_signature_db(const std::string& db_flag) {
  std::string path = db_flag;
  if (path.empty()) {
    if (const char* env = std::getenv("MANIFESTSCOPE_DB")) path = env;
  }
  if (path.empty()) return ms::SignatureDb::bundled();
  return ms::SignatureDb::parse(read_file(path), path);
}

// Explicit files keep argv order; directories expand to their *.apk files
// sorted by path. Output ordering (and AppN numbering) follows this list.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& input : inputs) {
    fs::path path(input);
    if (fs::is_directory(path)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".apk")
          found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(path);
    }
  }
  return out;
}

struct AnalyzeArgs {
  std::vector<std::string> inputs;
  std::string db_path;
  std::string policy_path;
  std::string out_dir;
  std::string format = "json";
  bool anonymize = false;
  int jobs = 1;
};

int run_analyze(const AnalyzeArgs& args) {
  ms::SignatureDb db = load_signature_db(args.db_path);
  ms::AnalyzeOptions options;
  options.signature_db = &db;
  if (!args.policy_path.empty())
    options.policy =
        ms::RiskPolicy::parse(read_file(args.policy_path), args.policy_path);

  std::vector<fs::path> apks = expand_inputs(args.inputs);
  if (apks.empty()) {
    std::cerr << "error: no .apk inputs found\n";
    return kExitUsage;
  }

  struct Result {
    std::string app_id;
    std::string rendered;   // chosen format, for the stream
    std::string canonical;  // JSON, for --out
    bool failed = false;
  };
  std::vector<Result> results(apks.size());
  ms::ReportFormat format = parse_format(args.format);

  // Index-stealing workers; results land in input order, so output is
  // byte-identical regardless of the job count.
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= apks.size()) return;
      try {
        ms::AppAnalysis app = ms::analyze_apk(apks[i], options);
        if (args.anonymize) {
          std::string anon = "App" + std::to_string(i + 1);
          app.app_id = anon;
          app.package = anon;
          app.risk.app_id = anon;
        }
        results[i].app_id = app.app_id;
        results[i].canonical = ms::render_app_report(app, ms::ReportFormat::Json);
        results[i].rendered = format == ms::ReportFormat::Json
                                  ? ms::render_app_report_line(app)
                                  : ms::render_app_report(app, format);
      } catch (const ms::Error& e) {
        results[i].app_id = args.anonymize ? "App" + std::to_string(i + 1)
                                           : apks[i].stem().string();
        results[i].canonical = ms::render_error_record(
            results[i].app_id, apks[i].string(), ms::error_kind(e), e.what());
        results[i].rendered = results[i].canonical;
        results[i].failed = true;
      }
    }
  };
  unsigned n_workers = static_cast<unsigned>(
      std::min<size_t>(std::max(args.jobs, 1), apks.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();

  bool any_failed = false;
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    for (size_t i = 0; i < apks.size(); ++i) {
      // File name carries the input ordinal plus the app id for stability.
      char index[8];
      std::snprintf(index, sizeof(index), "%03zu", i + 1);
      fs::path file = fs::path(args.out_dir) /
                      (std::string(index) + "-" + results[i].app_id + ".json");
      std::ofstream out(file, std::ios::binary);
      out << results[i].canonical;
    }
  }
  for (size_t i = 0; i < apks.size(); ++i) {
    if (args.out_dir.empty()) std::cout << results[i].rendered;
    if (results[i].failed) {
      any_failed = true;
      std::cerr << "warning: " << apks[i] << " failed to analyze\n";
    }
  }
  return any_failed ? kExitPartialFailure : kExitOk;
}

struct ReportArgs {
  std::string report_dir;
  std::string labels_path;
  std::string format = "markdown";
};

int run_report(const ReportArgs& args) {
  ms::CohortLabeling labeling;
  if (!args.labels_path.empty()) {
    if (!fs::exists(args.labels_path))
      throw ms::ReportError(ms::ReportError::Kind::MissingLabeling,
                            "labeling file not found: " + args.labels_path);
    labeling = ms::CohortLabeling::parse_csv(read_file(args.labels_path),
                                             args.labels_path);
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.report_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<ms::AppAnalysis> apps;
  for (const auto& file : files) {
    std::string text = read_file(file);
    if (ms::is_error_record(text)) {
      std::cerr << "warning: skipping error record " << file.filename() << "\n";
      continue;
    }
    apps.push_back(ms::app_report_from_json(text));
  }

  std::set<std::string> known;
  for (const auto& app : apps) known.insert(app.app_id);
  for (const auto& [app_id, cohort] : labeling.assignments)
    if (!known.count(app_id))
      std::cerr << "warning: labeling references unknown app_id '" << app_id
                << "'; ignored\n";
  for (const auto& app : apps)
    if (!labeling.assignments.count(app.app_id) && !labeling.assignments.empty())
      std::cerr << "warning: app '" << app.app_id
                << "' has no cohort label; grouped under 'unlabeled'\n";

  ms::CohortReport report = ms::aggregate(apps, labeling);
  std::cout << ms::render(report, parse_format(args.format));
  return kExitOk;
}

int run_fingerprints_list(const std::string& db_path) {
  ms::SignatureDb db = load_signature_db(db_path);
  std::cout << "# db-version: " << db.version << "\n";
  for (const auto& sig : db.signatures) {
    const char* category = sig.category == ms::SdkCategory::Analytics
                               ? "analytics"
                               : sig.category == ms::SdkCategory::Advertising
                                     ? "advertising"
                                     : "attribution";
    const char* kind = "";
    switch (sig.match_kind) {
      case ms::MatchKind::PackagePrefix: kind = "package-prefix"; break;
      case ms::MatchKind::MetadataKey: kind = "metadata-key"; break;
      case ms::MatchKind::ComponentClass: kind = "component-class"; break;
      case ms::MatchKind::PermissionName: kind = "permission-name"; break;
    }
    std::cout << sig.vendor << "\t" << category << "\t" << kind << "\t"
              << sig.pattern << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"manifestscope: static privacy/security analysis of Android "
               "application packages"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ms::kAnalyzerVersion));

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Analyze APKs and emit one report per app");
  analyze->add_option("inputs", analyze_args.inputs, "APK files or directories")
      ->required();
  analyze->add_option("--db", analyze_args.db_path, "Signature database path");
  analyze->add_option("--policy", analyze_args.policy_path,
                      "Risk policy file (key=value thresholds)");
  analyze->add_option("--out", analyze_args.out_dir,
                      "Write per-app JSON reports into this directory");
  analyze->add_option("--format", analyze_args.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  analyze->add_flag("--anonymize", analyze_args.anonymize,
                    "Replace app identifiers with App1..AppN (input order)");
  analyze->add_option("--jobs", analyze_args.jobs, "Parallel analyses")
      ->check(CLI::PositiveNumber);

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand(
      "report", "Aggregate per-app reports into a cohort report");
  report->add_option("report_dir", report_args.report_dir,
                     "Directory of per-app JSON reports")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--labels", report_args.labels_path,
                     "Cohort labeling CSV (app_id,cohort)");
  report->add_option("--format", report_args.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));

  CLI::App* fingerprints =
      app.add_subcommand("fingerprints", "Signature database utilities");
  std::string fingerprints_db;
  CLI::App* fingerprints_list =
      fingerprints->add_subcommand("list", "Print the signature database");
  fingerprints_list->add_option("--db", fingerprints_db,
                                "Signature database path");
  fingerprints->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) return run_analyze(analyze_args);
    if (*report) return run_report(report_args);
    if (*fingerprints_list) return run_fingerprints_list(fingerprints_db);
  } catch (const ms::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
