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

#include "depra/config.h"

#include <set>

#include "depra/error.h"
#include "depra/io.h"
#include "json_util.h"

namespace depra {
namespace {

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

}  // namespace

Config ConfigFromJson(const nlohmann::json& j,
                      const std::filesystem::path& base_dir) {
  using json_util::Optional;
  if (!j.is_object()) {
    throw Error(ErrorCode::kMalformedRecord, "config must be a JSON object");
  }
  static const std::set<std::string> kKeys = {
      "corpus_dir", "work_dir",    "deployment", "event_log",
      "snapshot",   "snapshot_every", "experts", "glossary",
      "audit_log",  "calibration", "attention",  "host",
      "port",       "ingest"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) {
      throw Error(ErrorCode::kMalformedRecord, "unknown config key " + key);
    }
  }

  Config c;
  auto path = [&](const char* key, const std::filesystem::path& fallback) {
    return Resolve(base_dir,
                   Optional<std::string>(j, key, fallback.string()));
  };
  c.corpus_dir = path("corpus_dir", c.corpus_dir);
  c.work_dir = path("work_dir", c.work_dir);
  c.deployment = path("deployment", c.deployment);
  c.event_log = path("event_log", c.event_log);
  c.snapshot = path("snapshot", c.snapshot);
  c.experts = path("experts", c.experts);
  c.glossary = path("glossary", c.glossary);
  c.audit_log = path("audit_log", c.audit_log);
  c.snapshot_every = Optional<std::size_t>(j, "snapshot_every",
                                           c.snapshot_every);
  if (j.contains("calibration")) {
    if (j.at("calibration").is_null()) {
      c.calibration.reset();
    } else {
      c.calibration = CalibrationParamsFromJson(j.at("calibration"));
    }
  }
  const std::string attention =
      Optional<std::string>(j, "attention", "per_category");
  if (attention == "per_category") {
    c.attention = AttentionPlacement::kPerCategory;
  } else if (attention == "none") {
    c.attention = AttentionPlacement::kNone;
  } else {
    throw Error(ErrorCode::kMalformedRecord,
                "attention must be per_category or none");
  }
  c.host = Optional<std::string>(j, "host", c.host);
  c.port = Optional<int>(j, "port", c.port);
  if (c.port < 0 || c.port > 65535) {
    throw Error(ErrorCode::kMalformedRecord, "port out of range");
  }
  if (j.contains("ingest")) {
    const auto& ing = j.at("ingest");
    c.ingest.min_description_words = Optional<std::size_t>(
        ing, "min_description_words", c.ingest.min_description_words);
    c.ingest.min_stopword_ratio = Optional<double>(
        ing, "min_stopword_ratio", c.ingest.min_stopword_ratio);
  }
  return c;
}

Config LoadConfig(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingPrerequisite,
                "config file not found: " + path.string());
  }
  return ConfigFromJson(io::ReadJsonFile(path),
                        std::filesystem::absolute(path).parent_path());
}

nlohmann::json ConfigToJson(const Config& c) {
  nlohmann::json j = {
      {"corpus_dir", c.corpus_dir.string()},
      {"work_dir", c.work_dir.string()},
      {"deployment", c.deployment.string()},
      {"event_log", c.event_log.string()},
      {"snapshot", c.snapshot.string()},
      {"snapshot_every", c.snapshot_every},
      {"experts", c.experts.string()},
      {"glossary", c.glossary.string()},
      {"audit_log", c.audit_log.string()},
      {"attention",
       c.attention == AttentionPlacement::kNone ? "none" : "per_category"},
      {"host", c.host},
      {"port", c.port},
      {"ingest",
       {{"min_description_words", c.ingest.min_description_words},
        {"min_stopword_ratio", c.ingest.min_stopword_ratio}}}};
  j["calibration"] =
      c.calibration ? nlohmann::json(*c.calibration) : nlohmann::json();
  return j;
}

}  // namespace depra
