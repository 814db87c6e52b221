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

#include "depra/selection.h"

#include <algorithm>
#include <set>

#include "depra/error.h"
#include "json_util.h"

namespace depra {

SelectionResult SelectRepresentatives(std::string cluster_id,
                                      std::span<const AppRecord> apps) {
  if (apps.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot select representatives from an empty app list");
  }
  SelectionResult result;
  result.cluster_id = std::move(cluster_id);

  std::set<PermissionId> remaining;
  for (const auto& app : apps) {
    remaining.insert(app.declared_permissions.begin(),
                     app.declared_permissions.end());
  }
  result.universal_permissions.assign(remaining.begin(), remaining.end());
  if (remaining.empty()) {
    result.no_permissions = true;
    return result;
  }

  std::vector<bool> taken(apps.size(), false);
  while (!remaining.empty()) {
    std::size_t best = apps.size();
    std::vector<PermissionId> best_coverage;
    for (std::size_t i = 0; i < apps.size(); ++i) {
      if (taken[i]) continue;
      const AppRecord& app = apps[i];
      std::vector<PermissionId> coverage;
      for (const auto& p : app.declared_permissions) {
        if (remaining.contains(p)) coverage.push_back(p);
      }
      std::sort(coverage.begin(), coverage.end());
      coverage.erase(std::unique(coverage.begin(), coverage.end()),
                     coverage.end());
      if (coverage.empty()) continue;
      bool better = false;
      if (best == apps.size() || coverage.size() > best_coverage.size()) {
        better = true;
      } else if (coverage.size() == best_coverage.size()) {
        const AppRecord& incumbent = apps[best];
        if (app.install_count != incumbent.install_count) {
          better = app.install_count > incumbent.install_count;
        } else {
          better = app.app_id < incumbent.app_id;
        }
      }
      if (better) {
        best = i;
        best_coverage = std::move(coverage);
      }
    }
    // Every remaining permission comes from some app, so a pick exists.
    taken[best] = true;
    for (const auto& p : best_coverage) remaining.erase(p);
    result.selected_app_ids.push_back(apps[best].app_id);
    result.coverage_trace.push_back(
        {apps[best].app_id, best_coverage, apps[best].install_count});
  }
  return result;
}

void to_json(nlohmann::json& j, const CoverageStep& v) {
  j = {{"app_id", v.app_id},
       {"newly_covered", v.newly_covered},
       {"install_count", v.install_count}};
}

void from_json(const nlohmann::json& j, CoverageStep& v) {
  v.app_id = json_util::Required<std::string>(j, "app_id");
  v.newly_covered =
      json_util::Required<std::vector<PermissionId>>(j, "newly_covered");
  v.install_count = json_util::Optional<std::int64_t>(j, "install_count", 0);
}

void to_json(nlohmann::json& j, const SelectionResult& v) {
  j = {{"cluster_id", v.cluster_id},
       {"selected_app_ids", v.selected_app_ids},
       {"coverage_trace", v.coverage_trace},
       {"universal_permissions", v.universal_permissions},
       {"no_permissions", v.no_permissions}};
}

void from_json(const nlohmann::json& j, SelectionResult& v) {
  using json_util::Optional;
  using json_util::Required;
  v.cluster_id = Required<std::string>(j, "cluster_id");
  v.selected_app_ids = Required<std::vector<std::string>>(j, "selected_app_ids");
  v.coverage_trace =
      Optional<std::vector<CoverageStep>>(j, "coverage_trace", {});
  v.universal_permissions =
      Optional<std::vector<PermissionId>>(j, "universal_permissions", {});
  v.no_permissions = Optional<bool>(j, "no_permissions", false);
}

}  // namespace depra
