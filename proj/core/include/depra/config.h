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

#ifndef DEPRA_CONFIG_H_
#define DEPRA_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "depra/ingestion.h"
#include "depra/model.h"

namespace depra {

enum class AttentionPlacement {
  kPerCategory,  // one checkpoint after each category's last question
  kNone,
};

// Pipeline and service settings. Relative paths are resolved against the
// directory holding the config file. The explanation service endpoint and
// credential come from DEPRA_EXPLAINER_URL / DEPRA_EXPLAINER_TOKEN instead.
struct Config {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path work_dir = ".";
  std::filesystem::path deployment = "deployment.json";
  std::filesystem::path event_log = "events.jsonl";
  std::filesystem::path snapshot = "snapshot.json";
  std::size_t snapshot_every = 500;
  std::filesystem::path experts;   // empty: comparison report unavailable
  std::filesystem::path glossary;  // empty: built-in glossary
  std::filesystem::path audit_log = "curation_audit.jsonl";
  // Absent means calibrated scores are refused.
  std::optional<CalibrationParams> calibration = CalibrationParams();
  AttentionPlacement attention = AttentionPlacement::kPerCategory;
  std::string host = "127.0.0.1";
  int port = 8080;
  IngestOptions ingest;
};

// Keys mirror the field names; "calibration": null disables calibration,
// "attention": "per_category" | "none". Throws kMalformedRecord on unknown
// keys or bad values.
Config ConfigFromJson(const nlohmann::json& j,
                      const std::filesystem::path& base_dir);
Config LoadConfig(const std::filesystem::path& path);
nlohmann::json ConfigToJson(const Config& config);

}  // namespace depra

#endif  // DEPRA_CONFIG_H_
