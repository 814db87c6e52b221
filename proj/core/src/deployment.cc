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

#include "depra/deployment.h"

#include <set>

#include "depra/error.h"
#include "depra/io.h"
#include "json_util.h"

namespace depra {

Deployment::Deployment(std::vector<DeploymentCategory> categories,
                       std::vector<AppRecord> apps,
                       std::vector<DataAccessBehavior> behaviors)
    : categories_(std::move(categories)),
      apps_(std::move(apps)),
      behaviors_(std::move(behaviors)) {
  Reindex();
  std::set<std::string, std::less<>> placed;
  for (const auto& c : categories_) {
    for (const auto& id : c.app_ids) {
      if (!app_index_.contains(id)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "category " + c.category_id + " lists unknown app " + id);
      }
      if (!placed.insert(id).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "app " + id + " appears in more than one category");
      }
    }
  }
  for (const auto& b : behaviors_) {
    if (!app_index_.contains(b.app_id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "behavior " + b.behavior_id + " names unknown app " +
                      b.app_id);
    }
  }
}

void Deployment::Reindex() {
  app_index_.clear();
  behavior_index_.clear();
  for (std::size_t i = 0; i < apps_.size(); ++i) {
    if (!app_index_.emplace(apps_[i].app_id, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate app " + apps_[i].app_id);
    }
  }
  for (std::size_t i = 0; i < behaviors_.size(); ++i) {
    if (!behavior_index_.emplace(behaviors_[i].behavior_id, i).second) {
      throw Error(ErrorCode::kDuplicateBehavior,
                  "duplicate behavior " + behaviors_[i].behavior_id);
    }
  }
}

const AppRecord* Deployment::FindApp(std::string_view app_id) const {
  auto it = app_index_.find(app_id);
  return it == app_index_.end() ? nullptr : &apps_[it->second];
}

const DataAccessBehavior* Deployment::FindBehavior(
    std::string_view behavior_id) const {
  auto it = behavior_index_.find(behavior_id);
  return it == behavior_index_.end() ? nullptr : &behaviors_[it->second];
}

const DeploymentCategory* Deployment::FindCategory(
    std::string_view category_id) const {
  for (const auto& c : categories_) {
    if (c.category_id == category_id) return &c;
  }
  return nullptr;
}

const DeploymentCategory* Deployment::CategoryOfApp(
    std::string_view app_id) const {
  for (const auto& c : categories_) {
    for (const auto& id : c.app_ids) {
      if (id == app_id) return &c;
    }
  }
  return nullptr;
}

std::vector<const DataAccessBehavior*> Deployment::ServedBehaviors(
    std::string_view app_id) const {
  std::vector<const DataAccessBehavior*> out;
  for (const auto& b : behaviors_) {
    if (b.app_id == app_id && b.explanation.verified) out.push_back(&b);
  }
  return out;
}

std::vector<Question> Deployment::QuestionSequence() const {
  std::vector<Question> out;
  for (const auto& c : categories_) {
    for (const auto& app_id : c.app_ids) {
      for (const auto* b : ServedBehaviors(app_id)) {
        out.push_back({c.category_id, app_id, b->behavior_id});
      }
    }
  }
  return out;
}

BehaviorMap Deployment::BehaviorIndex() const {
  BehaviorMap out;
  for (const auto& b : behaviors_) out.emplace(b.behavior_id, b);
  return out;
}

void to_json(nlohmann::json& j, const DeploymentCategory& v) {
  j = {{"category_id", v.category_id},
       {"name", v.name},
       {"description", v.description},
       {"market_category", v.market_category},
       {"keywords", v.keywords},
       {"app_ids", v.app_ids}};
}

void from_json(const nlohmann::json& j, DeploymentCategory& v) {
  using json_util::Optional;
  using json_util::Required;
  v.category_id = Required<std::string>(j, "category_id");
  v.name = Optional<std::string>(j, "name", v.category_id);
  v.description = Optional<std::string>(j, "description", "");
  v.market_category = Optional<std::string>(j, "market_category", "");
  v.keywords = Optional<std::vector<std::string>>(j, "keywords", {});
  v.app_ids = Required<std::vector<std::string>>(j, "app_ids");
}

nlohmann::json DeploymentToJson(const Deployment& deployment) {
  return {{"categories", deployment.categories()},
          {"apps", deployment.apps()},
          {"behaviors", deployment.behaviors()}};
}

Deployment DeploymentFromJson(const nlohmann::json& j) {
  using json_util::Required;
  return Deployment(
      Required<std::vector<DeploymentCategory>>(j, "categories"),
      Required<std::vector<AppRecord>>(j, "apps"),
      Required<std::vector<DataAccessBehavior>>(j, "behaviors"));
}

Deployment LoadDeployment(const std::filesystem::path& path) {
  return DeploymentFromJson(io::ReadJsonFile(path));
}

void SaveDeployment(const std::filesystem::path& path,
                    const Deployment& deployment) {
  io::WriteJsonFile(path, DeploymentToJson(deployment));
}

}  // namespace depra
