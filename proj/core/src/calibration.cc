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

#include "depra/calibration.h"

#include <algorithm>
#include <set>

#include "depra/error.h"
#include "depra/io.h"

namespace depra {
namespace {

double SortedMean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

GroupSummary Summarize(std::string group,
                       const std::vector<const CalibratedRating*>& rows,
                       const BehaviorMap* behaviors) {
  GroupSummary s;
  s.group = std::move(group);
  std::set<std::string_view> raters;
  std::vector<double> raw, cal;
  for (const CalibratedRating* r : rows) {
    raters.insert(r->rater_id);
    raw.push_back(r->raw);
    cal.push_back(r->calibrated);
  }
  s.raters = raters.size();
  s.ratings = rows.size();
  s.raw_mean = SortedMean(raw);
  s.calibrated_mean = SortedMean(cal);
  if (behaviors != nullptr) {
    std::vector<ScoredRating> raw_scored, cal_scored;
    for (const CalibratedRating* r : rows) {
      raw_scored.push_back({r->rater_id, r->behavior_id, r->raw});
      cal_scored.push_back({r->rater_id, r->behavior_id, r->calibrated});
    }
    std::vector<double> raw_apps, cal_apps;
    for (const auto& a : ScoreApps(raw_scored, *behaviors)) {
      raw_apps.push_back(a.score);
    }
    for (const auto& a : ScoreApps(cal_scored, *behaviors)) {
      cal_apps.push_back(a.score);
    }
    if (!raw_apps.empty()) {
      s.raw_app_score_mean = SortedMean(raw_apps);
      s.calibrated_app_score_mean = SortedMean(cal_apps);
    }
  }
  return s;
}

}  // namespace

RiskClass ClassifyRisk(std::span<const RiskAnswer> answers) {
  if (answers.size() != kRiskSurveyItems) {
    throw Error(ErrorCode::kIncompleteSurvey,
                "risk survey needs exactly 4 answers, got " +
                    std::to_string(answers.size()));
  }
  // Gamble choices in the gain frame (items 1-2) plus gamble choices in the
  // loss frame (items 3-4).
  const auto gain_gambles =
      std::count(answers.begin(), answers.begin() + 2, RiskAnswer::kB);
  const auto loss_gambles =
      std::count(answers.begin() + 2, answers.end(), RiskAnswer::kB);
  const auto k = gain_gambles + loss_gambles;
  if (k >= 3) return RiskClass::kSeeking;
  if (k <= 1) return RiskClass::kAverse;
  return RiskClass::kNeutral;
}

double AdjustRating(double rating, RiskClass risk_class,
                    const CalibrationParams& params) {
  switch (risk_class) {
    case RiskClass::kAverse:
      return rating + params.lambda() * params.delta();
    case RiskClass::kSeeking:
      return rating - (1.0 - params.lambda()) * params.delta();
    case RiskClass::kNeutral:
      return rating;
  }
  return rating;
}

CalibrationOutput CalibrateDataset(std::span<const Rating> ratings,
                                   const ProfileMap& profiles,
                                   const CalibrationParams& params,
                                   const BehaviorMap* behaviors) {
  std::set<std::string> missing;
  for (const auto& r : ratings) {
    if (!profiles.contains(r.rater_id)) missing.insert(r.rater_id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) {
      if (!list.empty()) list += ", ";
      list += id;
    }
    throw Error(ErrorCode::kMissingProfile, "no risk profile for: " + list);
  }

  CalibrationOutput out;
  out.table.reserve(ratings.size());
  for (const auto& r : ratings) {
    const RiskClass cls = profiles.find(r.rater_id)->second.risk_class;
    const double raw = static_cast<double>(r.score);
    out.table.push_back(
        {r.rater_id, r.behavior_id, cls, raw, AdjustRating(raw, cls, params)});
  }

  std::vector<const CalibratedRating*> all;
  for (const auto& row : out.table) all.push_back(&row);
  for (RiskClass cls : kAllRiskClasses) {
    std::vector<const CalibratedRating*> rows;
    for (const auto* row : all) {
      if (row->risk_class == cls) rows.push_back(row);
    }
    out.groups.push_back(
        Summarize(std::string(RiskClassName(cls)), rows, behaviors));
  }
  out.overall = Summarize("all", all, behaviors);
  return out;
}

std::vector<ScoredRating> CalibratedScores(const CalibrationOutput& output) {
  std::vector<ScoredRating> out;
  out.reserve(output.table.size());
  for (const auto& row : output.table) {
    out.push_back({row.rater_id, row.behavior_id, row.calibrated});
  }
  return out;
}

void to_json(nlohmann::json& j, const CalibratedRating& v) {
  j = {{"rater_id", v.rater_id},
       {"behavior_id", v.behavior_id},
       {"risk_class", v.risk_class},
       {"raw", v.raw},
       {"calibrated", v.calibrated}};
}

void to_json(nlohmann::json& j, const GroupSummary& v) {
  j = {{"group", v.group},
       {"raters", v.raters},
       {"ratings", v.ratings},
       {"raw_mean", v.raw_mean},
       {"calibrated_mean", v.calibrated_mean},
       {"mean_shift", v.calibrated_mean - v.raw_mean}};
  if (v.raw_app_score_mean) {
    j["raw_app_score_mean"] = *v.raw_app_score_mean;
    j["calibrated_app_score_mean"] = *v.calibrated_app_score_mean;
  }
}

void to_json(nlohmann::json& j, const CalibrationOutput& v) {
  j = {{"ratings", v.table}, {"groups", v.groups}, {"overall", v.overall}};
}

std::string CalibratedToCsv(const CalibrationOutput& output) {
  std::string out = "rater_id,behavior_id,risk_class,raw,calibrated\n";
  for (const auto& row : output.table) {
    out += io::CsvField(row.rater_id) + "," + io::CsvField(row.behavior_id) +
           "," + std::string(RiskClassName(row.risk_class)) + "," +
           io::FormatDouble(row.raw) + "," + io::FormatDouble(row.calibrated) +
           "\n";
  }
  return out;
}

}  // namespace depra
