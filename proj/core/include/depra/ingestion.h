// Copyright 2026 The DePra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEPRA_INGESTION_H_
#define DEPRA_INGESTION_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/error.h"
#include "depra/model.h"

namespace depra {

struct ThirdPartyEntry {
  std::string package_prefix;
  SdkCategory category = SdkCategory::kDevelopmentAid;
  std::string sdk_name;
};

// Package-prefix database of known third-party libraries. A prefix matches
// a code unit when the unit equals the prefix or continues it at a '.'
// boundary ("com.adnet" matches "com.adnet.sdk.Loader", not
// "com.adnetwork.X"). The longest matching prefix wins.
class ThirdPartyDb {
 public:
  ThirdPartyDb() = default;
  // Throws kInvalidArgument on empty or duplicate prefixes.
  explicit ThirdPartyDb(std::vector<ThirdPartyEntry> entries);

  const ThirdPartyEntry* LongestMatch(std::string_view code_unit) const;
  const std::vector<ThirdPartyEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  // Sorted by prefix.
  std::vector<ThirdPartyEntry> entries_;
};

struct CallChainRecord {
  std::string app_id;
  std::string sensitive_api;
  // Entry point first; the last element invokes sensitive_api.
  std::vector<std::string> chain;
  PermissionId permission;
};

struct DropEntry {
  std::string app_id;
  std::string reason;  // "short_description" | "non_english"
  std::size_t word_count = 0;
};

struct DropReport {
  std::vector<DropEntry> dropped;
  std::size_t short_descriptions = 0;
  std::size_t non_english = 0;
  std::size_t orphan_call_chains = 0;
};

struct IngestOptions {
  std::size_t min_description_words = 30;
  double min_stopword_ratio = 0.2;
};

struct Corpus {
  std::vector<AppRecord> apps;  // sorted by app_id
  std::vector<CallChainRecord> call_chains;
  ThirdPartyDb third_party_db;
  DropReport drop_report;
};

// Reads apps.jsonl, callchains.jsonl (optional) and thirdparty_db.jsonl
// (optional) from `dir`. Apps with descriptions shorter than
// `min_description_words` words or failing the English heuristic are
// dropped and reported; call chains of dropped apps are discarded.
// Throws kMalformedRecord (file:line: reason) or kEmptyCorpus.
Corpus LoadCorpus(const std::filesystem::path& dir,
                  const IngestOptions& options = {});

// Classifies by the frame that invokes the sensitive API (last chain
// element).
ControllerClass ClassifyController(const CallChainRecord& record,
                                   const ThirdPartyDb& db);

struct BuildIssue {
  std::size_t record_index = 0;
  ErrorCode code = ErrorCode::kPermissionNotDeclared;
  std::string message;
};

struct BehaviorBuild {
  std::vector<DataAccessBehavior> behaviors;  // sorted by (data_type, purpose)
  std::vector<BuildIssue> issues;
};

// One behavior per distinct (data_type, purpose_type). Records whose
// permission the app does not declare are skipped and reported as
// kPermissionNotDeclared; non-sensitive permissions as kInvalidArgument.
// Throws kInvalidArgument if a record belongs to another app.
BehaviorBuild BuildBehaviors(const AppRecord& app,
                             std::span<const CallChainRecord> records,
                             const ThirdPartyDb& db);

void to_json(nlohmann::json& j, const ThirdPartyEntry& v);
void from_json(const nlohmann::json& j, ThirdPartyEntry& v);
void to_json(nlohmann::json& j, const CallChainRecord& v);
void from_json(const nlohmann::json& j, CallChainRecord& v);
void to_json(nlohmann::json& j, const DropReport& v);
void to_json(nlohmann::json& j, const BuildIssue& v);

}  // namespace depra

#endif  // DEPRA_INGESTION_H_
