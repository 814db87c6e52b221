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

#include "depra/scoring.h"

#include <algorithm>
#include <cmath>

#include "depra/error.h"
#include "depra/io.h"

namespace depra {

RatingDataset CollectDataset(const StoreState& state) {
  RatingDataset out;
  for (const auto& [id, s] : state.sessions) {
    if (s->status == SessionStatus::kFlagged) {
      out.excluded_sessions.push_back(id);
      out.excluded_ratings += s->ratings.size();
      continue;
    }
    for (const auto& [bid, r] : s->ratings) out.ratings.push_back(r);
    if (s->profile) out.profiles.emplace(s->rater_id, *s->profile);
  }
  std::sort(out.ratings.begin(), out.ratings.end(),
            [](const Rating& a, const Rating& b) {
              return std::tie(a.rater_id, a.behavior_id) <
                     std::tie(b.rater_id, b.behavior_id);
            });
  return out;
}

std::vector<ScoredRating> DatasetScores(
    const RatingDataset& dataset,
    const std::optional<CalibrationParams>& calibration) {
  if (!calibration) return ToScored(dataset.ratings);
  return CalibratedScores(
      CalibrateDataset(dataset.ratings, dataset.profiles, *calibration));
}

std::vector<AppScore> ScoreAllApps(
    const RatingDataset& dataset, const BehaviorMap& behaviors,
    const std::optional<CalibrationParams>& calibration) {
  return ScoreApps(DatasetScores(dataset, calibration), behaviors);
}

AppScore ScoreOneApp(const RatingDataset& dataset,
                     const BehaviorMap& behaviors, std::string_view app_id,
                     const std::optional<CalibrationParams>& calibration) {
  RatingDataset subset;
  for (const auto& r : dataset.ratings) {
    auto it = behaviors.find(r.behavior_id);
    if (it != behaviors.end() && it->second.app_id == app_id) {
      subset.ratings.push_back(r);
    }
  }
  if (subset.ratings.empty()) {
    throw Error(ErrorCode::kNotFound,
                "no ratings for app " + std::string(app_id));
  }
  subset.profiles = dataset.profiles;
  std::vector<double> scores;
  for (const auto& s : DatasetScores(subset, calibration)) {
    scores.push_back(s.score);
  }
  return ComputeAppScore(std::string(app_id), scores);
}

std::vector<BehaviorDistribution> DatasetDistributions(
    const RatingDataset& dataset,
    const std::optional<CalibrationParams>& calibration) {
  std::map<std::string, std::vector<ScoredRating>> by_behavior;
  for (auto& s : DatasetScores(dataset, calibration)) {
    by_behavior[s.behavior_id].push_back(std::move(s));
  }
  std::vector<BehaviorDistribution> out;
  for (const auto& [id, rows] : by_behavior) {
    out.push_back(ComputeDistribution(rows));
  }
  return out;
}

nlohmann::json DistributionsReport(
    const RatingDataset& dataset, const BehaviorMap& behaviors,
    const std::optional<CalibrationParams>& calibration) {
  const auto scores = DatasetScores(dataset, calibration);
  std::map<std::string, std::vector<ScoredRating>> by_behavior;
  for (const auto& s : scores) by_behavior[s.behavior_id].push_back(s);
  nlohmann::json dists = nlohmann::json::array();
  for (const auto& [id, rows] : by_behavior) {
    nlohmann::json d = ComputeDistribution(rows);
    auto b = behaviors.find(id);
    if (b != behaviors.end()) {
      d["app_id"] = b->second.app_id;
      d["controller"] = b->second.controller;
    }
    dists.push_back(std::move(d));
  }
  nlohmann::json report = {{"calibrated", calibration.has_value()},
                           {"n_ratings", scores.size()},
                           {"excluded_sessions", dataset.excluded_sessions},
                           {"excluded_ratings", dataset.excluded_ratings},
                           {"distributions", dists}};
  const ControllerSplit split = SplitByController(scores, behaviors);
  report["first_party_n"] = split.first_party.size();
  report["third_party_n"] = split.third_party.size();
  if (!split.first_party.empty() && !split.third_party.empty()) {
    report["controller_u_test"] =
        stats::MannWhitneyU(split.first_party, split.third_party);
  } else {
    report["controller_u_test"] = nullptr;
  }
  return report;
}

std::vector<ScoredRating> LoadExpertRatings(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingPrerequisite,
                "expert ratings not found: " + path.string());
  }
  std::vector<ScoredRating> out;
  io::ForEachJsonLine(path, [&](std::size_t, const nlohmann::json& j) {
    Rating r = j.get<Rating>();
    out.push_back({r.rater_id, r.behavior_id, static_cast<double>(r.score)});
  });
  return out;
}

stats::ComparisonReport ComparisonForDataset(
    const RatingDataset& dataset, std::span<const ScoredRating> experts,
    const BehaviorMap& behaviors,
    const std::optional<CalibrationParams>& calibration) {
  const auto users = DatasetScores(dataset, calibration);
  return stats::CompareUserExpert(users, experts, behaviors);
}

std::string RatingsToCsv(std::span<const Rating> ratings) {
  std::string out = "rater_id,behavior_id,score,submitted_at\n";
  for (const auto& r : ratings) {
    out += io::CsvField(r.rater_id) + "," + io::CsvField(r.behavior_id) + "," +
           std::to_string(r.score) + "," + std::to_string(r.submitted_at) +
           "\n";
  }
  return out;
}

}  // namespace depra
