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

#include "depra/ingestion.h"

#include <algorithm>
#include <map>
#include <set>

#include "depra/error.h"
#include "depra/io.h"
#include "depra/text.h"
#include "json_util.h"

namespace depra {

ThirdPartyDb::ThirdPartyDb(std::vector<ThirdPartyEntry> entries)
    : entries_(std::move(entries)) {
  for (auto& e : entries_) {
    while (!e.package_prefix.empty() && e.package_prefix.back() == '.') {
      e.package_prefix.pop_back();
    }
    if (e.package_prefix.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "third-party entry with empty package prefix");
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const ThirdPartyEntry& a, const ThirdPartyEntry& b) {
              return a.package_prefix < b.package_prefix;
            });
  auto dup = std::adjacent_find(
      entries_.begin(), entries_.end(),
      [](const ThirdPartyEntry& a, const ThirdPartyEntry& b) {
        return a.package_prefix == b.package_prefix;
      });
  if (dup != entries_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate third-party prefix " + dup->package_prefix);
  }
}

const ThirdPartyEntry* ThirdPartyDb::LongestMatch(
    std::string_view code_unit) const {
  auto find_exact = [&](std::string_view prefix) -> const ThirdPartyEntry* {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), prefix,
        [](const ThirdPartyEntry& e, std::string_view p) {
          return e.package_prefix < p;
        });
    if (it != entries_.end() && it->package_prefix == prefix) return &*it;
    return nullptr;
  };
  // Candidates are the code unit itself and every prefix ending before a
  // '.' or '$' separator; try them longest first.
  if (const ThirdPartyEntry* e = find_exact(code_unit)) return e;
  for (std::size_t pos = code_unit.size(); pos-- > 0;) {
    if (code_unit[pos] != '.' && code_unit[pos] != '$') continue;
    if (const ThirdPartyEntry* e = find_exact(code_unit.substr(0, pos))) {
      return e;
    }
  }
  return nullptr;
}

ControllerClass ClassifyController(const CallChainRecord& record,
                                   const ThirdPartyDb& db) {
  if (record.chain.empty()) return ControllerClass::FirstParty();
  const ThirdPartyEntry* match = db.LongestMatch(record.chain.back());
  if (match == nullptr) return ControllerClass::FirstParty();
  return ControllerClass::ThirdParty(match->category);
}

BehaviorBuild BuildBehaviors(const AppRecord& app,
                             std::span<const CallChainRecord> records,
                             const ThirdPartyDb& db) {
  BehaviorBuild out;
  std::map<std::pair<DataType, std::string>, DataAccessBehavior> by_triple;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CallChainRecord& record = records[i];
    if (record.app_id != app.app_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "call chain for " + record.app_id +
                      " passed with app " + app.app_id);
    }
    PermissionId permission = NormalizePermission(record.permission);
    std::optional<DataType> type = DataTypeOfPermission(permission);
    if (!type) {
      out.issues.push_back({i, ErrorCode::kInvalidArgument,
                            "permission " + permission +
                                " is not in the sensitive data table"});
      continue;
    }
    if (!app.Declares(permission)) {
      out.issues.push_back({i, ErrorCode::kPermissionNotDeclared,
                            app.app_id + " does not declare " + permission});
      continue;
    }
    ControllerClass controller = ClassifyController(record, db);
    std::string purpose = controller.purpose_type();
    auto key = std::make_pair(*type, purpose);
    if (by_triple.contains(key)) continue;
    DataAccessBehavior behavior;
    behavior.behavior_id = MakeBehaviorId(app.app_id, *type, purpose);
    behavior.app_id = app.app_id;
    behavior.data_type = *type;
    behavior.permission = permission;
    behavior.call_chain = record.chain;
    behavior.controller = controller;
    behavior.purpose_type = purpose;
    by_triple.emplace(std::move(key), std::move(behavior));
  }
  for (auto& [key, behavior] : by_triple) {
    out.behaviors.push_back(std::move(behavior));
  }
  return out;
}

Corpus LoadCorpus(const std::filesystem::path& dir,
                  const IngestOptions& options) {
  namespace fs = std::filesystem;
  const fs::path apps_path = dir / "apps.jsonl";
  if (!fs::is_directory(dir) || !fs::exists(apps_path)) {
    throw Error(ErrorCode::kEmptyCorpus,
                "no apps.jsonl found in " + dir.string());
  }

  Corpus corpus;
  std::set<std::string> seen;
  std::vector<AppRecord> loaded;
  io::ForEachJsonLine(apps_path, [&](std::size_t, const nlohmann::json& j) {
    auto app = j.get<AppRecord>();
    if (!seen.insert(app.app_id).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  "duplicate app_id " + app.app_id);
    }
    loaded.push_back(std::move(app));
  });
  if (loaded.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "apps.jsonl holds no records");
  }

  std::sort(loaded.begin(), loaded.end(),
            [](const AppRecord& a, const AppRecord& b) {
              return a.app_id < b.app_id;
            });
  std::set<std::string> retained;
  for (auto& app : loaded) {
    std::size_t words = text::WordCount(app.description);
    if (words < options.min_description_words) {
      corpus.drop_report.dropped.push_back(
          {app.app_id, "short_description", words});
      ++corpus.drop_report.short_descriptions;
      continue;
    }
    if (!text::LooksEnglish(app.description, options.min_stopword_ratio)) {
      corpus.drop_report.dropped.push_back({app.app_id, "non_english", words});
      ++corpus.drop_report.non_english;
      continue;
    }
    retained.insert(app.app_id);
    corpus.apps.push_back(std::move(app));
  }

  const fs::path chains_path = dir / "callchains.jsonl";
  if (fs::exists(chains_path)) {
    io::ForEachJsonLine(chains_path,
                        [&](std::size_t, const nlohmann::json& j) {
                          auto record = j.get<CallChainRecord>();
                          if (!seen.contains(record.app_id)) {
                            ++corpus.drop_report.orphan_call_chains;
                            return;
                          }
                          if (!retained.contains(record.app_id)) return;
                          corpus.call_chains.push_back(std::move(record));
                        });
  }
  std::stable_sort(corpus.call_chains.begin(), corpus.call_chains.end(),
                   [](const CallChainRecord& a, const CallChainRecord& b) {
                     return a.app_id < b.app_id;
                   });

  const fs::path db_path = dir / "thirdparty_db.jsonl";
  if (fs::exists(db_path)) {
    std::vector<ThirdPartyEntry> entries;
    io::ForEachJsonLine(db_path, [&](std::size_t, const nlohmann::json& j) {
      entries.push_back(j.get<ThirdPartyEntry>());
    });
    try {
      corpus.third_party_db = ThirdPartyDb(std::move(entries));
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedRecord,
                  "thirdparty_db.jsonl: " + std::string(e.what()));
    }
  }
  return corpus;
}

void to_json(nlohmann::json& j, const ThirdPartyEntry& v) {
  j = {{"package_prefix", v.package_prefix},
       {"sdk_category", v.category},
       {"sdk_name", v.sdk_name}};
}

void from_json(const nlohmann::json& j, ThirdPartyEntry& v) {
  v.package_prefix = json_util::Required<std::string>(j, "package_prefix");
  v.category = json_util::Required<SdkCategory>(j, "sdk_category");
  v.sdk_name = json_util::Optional<std::string>(j, "sdk_name", "");
}

void to_json(nlohmann::json& j, const CallChainRecord& v) {
  j = {{"app_id", v.app_id},
       {"sensitive_api", v.sensitive_api},
       {"chain", v.chain},
       {"permission", v.permission}};
}

void from_json(const nlohmann::json& j, CallChainRecord& v) {
  v.app_id = json_util::Required<std::string>(j, "app_id");
  v.sensitive_api = json_util::Required<std::string>(j, "sensitive_api");
  v.chain = json_util::Required<std::vector<std::string>>(j, "chain");
  v.permission =
      NormalizePermission(json_util::Required<std::string>(j, "permission"));
  if (v.chain.empty()) {
    throw Error(ErrorCode::kMalformedRecord, "call chain must be non-empty");
  }
}

void to_json(nlohmann::json& j, const DropReport& v) {
  nlohmann::json dropped = nlohmann::json::array();
  for (const auto& d : v.dropped) {
    dropped.push_back({{"app_id", d.app_id},
                       {"reason", d.reason},
                       {"word_count", d.word_count}});
  }
  j = {{"dropped", dropped},
       {"short_descriptions", v.short_descriptions},
       {"non_english", v.non_english},
       {"orphan_call_chains", v.orphan_call_chains}};
}

void to_json(nlohmann::json& j, const BuildIssue& v) {
  j = {{"record_index", v.record_index},
       {"error", ErrorCodeName(v.code)},
       {"message", v.message}};
}

}  // namespace depra
