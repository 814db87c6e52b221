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

#ifndef DEPRA_DEPLOYMENT_H_
#define DEPRA_DEPLOYMENT_H_

// The curated study content served to raters: categories with their
// representative apps, app metadata, and every behavior with its
// explanation. Persisted as deployment.json.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/calibration.h"
#include "depra/model.h"

namespace depra {

struct DeploymentCategory {
  std::string category_id;
  std::string name;
  std::string description;
  std::string market_category;
  std::vector<std::string> keywords;
  std::vector<std::string> app_ids;  // selection order

  friend bool operator==(const DeploymentCategory&,
                         const DeploymentCategory&) = default;
};

struct Question {
  std::string category_id;
  std::string app_id;
  std::string behavior_id;
};

class Deployment {
 public:
  Deployment() = default;
  // Throws kInvalidArgument when a category names an unknown app, an app
  // appears in two categories, a behavior names an unknown app, or a
  // behavior id repeats.
  Deployment(std::vector<DeploymentCategory> categories,
             std::vector<AppRecord> apps,
             std::vector<DataAccessBehavior> behaviors);

  const std::vector<DeploymentCategory>& categories() const {
    return categories_;
  }
  const std::vector<AppRecord>& apps() const { return apps_; }
  const std::vector<DataAccessBehavior>& behaviors() const {
    return behaviors_;
  }
  std::vector<DataAccessBehavior>& mutable_behaviors() { return behaviors_; }

  const AppRecord* FindApp(std::string_view app_id) const;
  const DataAccessBehavior* FindBehavior(std::string_view behavior_id) const;
  const DeploymentCategory* FindCategory(std::string_view category_id) const;
  const DeploymentCategory* CategoryOfApp(std::string_view app_id) const;

  // Verified behaviors of one app, in stored order.
  std::vector<const DataAccessBehavior*> ServedBehaviors(
      std::string_view app_id) const;

  // The linear question order: categories, then apps in selection order,
  // then each app's verified behaviors.
  std::vector<Question> QuestionSequence() const;

  // Every behavior keyed by id, verified or not.
  BehaviorMap BehaviorIndex() const;

 private:
  void Reindex();

  std::vector<DeploymentCategory> categories_;
  std::vector<AppRecord> apps_;
  std::vector<DataAccessBehavior> behaviors_;
  std::map<std::string, std::size_t, std::less<>> app_index_;
  std::map<std::string, std::size_t, std::less<>> behavior_index_;
};

void to_json(nlohmann::json& j, const DeploymentCategory& v);
void from_json(const nlohmann::json& j, DeploymentCategory& v);
nlohmann::json DeploymentToJson(const Deployment& deployment);
Deployment DeploymentFromJson(const nlohmann::json& j);

Deployment LoadDeployment(const std::filesystem::path& path);
void SaveDeployment(const std::filesystem::path& path,
                    const Deployment& deployment);

}  // namespace depra

#endif  // DEPRA_DEPLOYMENT_H_
