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

#ifndef DEPRA_CALIBRATION_H_
#define DEPRA_CALIBRATION_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/model.h"
#include "depra/rating.h"

namespace depra {

inline constexpr std::size_t kRiskSurveyItems = 4;

// Survey scoring. Scenarios 1-2 offer a sure gain (A) against a gamble (B);
// scenarios 3-4 a sure loss (A) against a gamble (B). The risk score k is
// the number of B answers: k <= 1 is averse, k >= 3 seeking, k == 2
// neutral. Throws kIncompleteSurvey unless exactly four answers are given.
RiskClass ClassifyRisk(std::span<const RiskAnswer> answers);

// Averse: r + lambda * delta. Seeking: r - (1 - lambda) * delta. Neutral: r.
double AdjustRating(double rating, RiskClass risk_class,
                    const CalibrationParams& params);

struct CalibratedRating {
  std::string rater_id;
  std::string behavior_id;
  RiskClass risk_class = RiskClass::kNeutral;
  double raw = 0.0;
  double calibrated = 0.0;
};

struct GroupSummary {
  std::string group;  // "averse" | "neutral" | "seeking" | "all"
  std::size_t raters = 0;
  std::size_t ratings = 0;
  double raw_mean = 0.0;
  double calibrated_mean = 0.0;
  // Mean over apps of the group's own AppScore, before/after calibration.
  // Absent when no behavior map was supplied.
  std::optional<double> raw_app_score_mean;
  std::optional<double> calibrated_app_score_mean;
};

struct CalibrationOutput {
  std::vector<CalibratedRating> table;  // input order
  std::vector<GroupSummary> groups;     // averse, neutral, seeking
  GroupSummary overall;
};

using ProfileMap = std::map<std::string, RaterProfile, std::less<>>;
using BehaviorMap = std::map<std::string, DataAccessBehavior, std::less<>>;

// Applies AdjustRating to each rating using its rater's class. Throws
// kMissingProfile listing every rater without a profile. `behaviors` is
// needed only for the AppScore-level summary.
CalibrationOutput CalibrateDataset(std::span<const Rating> ratings,
                                   const ProfileMap& profiles,
                                   const CalibrationParams& params,
                                   const BehaviorMap* behaviors = nullptr);

std::vector<ScoredRating> CalibratedScores(const CalibrationOutput& output);

void to_json(nlohmann::json& j, const CalibratedRating& v);
void to_json(nlohmann::json& j, const GroupSummary& v);
void to_json(nlohmann::json& j, const CalibrationOutput& v);

// Calibrated export: rater_id, behavior_id, risk_class, raw, calibrated.
std::string CalibratedToCsv(const CalibrationOutput& output);

}  // namespace depra

#endif  // DEPRA_CALIBRATION_H_
