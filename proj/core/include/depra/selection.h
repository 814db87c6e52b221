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

#ifndef DEPRA_SELECTION_H_
#define DEPRA_SELECTION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/model.h"

namespace depra {

struct CoverageStep {
  std::string app_id;
  std::vector<PermissionId> newly_covered;  // sorted, never empty
  std::int64_t install_count = 0;

  friend bool operator==(const CoverageStep&, const CoverageStep&) = default;
};

struct SelectionResult {
  std::string cluster_id;
  std::vector<std::string> selected_app_ids;  // in selection order
  std::vector<CoverageStep> coverage_trace;
  std::vector<PermissionId> universal_permissions;  // sorted
  // No app declared any permission; the selection is empty.
  bool no_permissions = false;

  friend bool operator==(const SelectionResult&,
                         const SelectionResult&) = default;
};

// Greedy permission cover. Each round picks the app covering the most
// still-uncovered permissions; ties go to the higher install count, then to
// the lexicographically smallest app_id. Apps without permissions are never
// picked. Throws kInvalidArgument for an empty app list.
SelectionResult SelectRepresentatives(std::string cluster_id,
                                      std::span<const AppRecord> apps);

void to_json(nlohmann::json& j, const CoverageStep& v);
void from_json(const nlohmann::json& j, CoverageStep& v);
void to_json(nlohmann::json& j, const SelectionResult& v);
void from_json(const nlohmann::json& j, SelectionResult& v);

}  // namespace depra

#endif  // DEPRA_SELECTION_H_
