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

#ifndef DEPRA_RATING_H_
#define DEPRA_RATING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/model.h"

namespace depra {

enum class ScoreMode {
  kNegativeSum,      // some score < 0: sum of the negative scores
  kNonNegativeMean,  // all scores >= 0: arithmetic mean
};

std::string_view ScoreModeName(ScoreMode mode);

struct AppScore {
  std::string app_id;
  double score = 0.0;
  ScoreMode mode = ScoreMode::kNonNegativeMean;
  std::size_t n = 0;

  friend bool operator==(const AppScore&, const AppScore&) = default;
};

// Sum of negatives when any score is negative, otherwise the mean. Scores
// may be real-valued (calibrated). Throws kEmptyRatings.
AppScore ComputeAppScore(std::string app_id, std::span<const double> scores);

// A (possibly calibrated) score attached to its rater and behavior.
struct ScoredRating {
  std::string rater_id;
  std::string behavior_id;
  double score = 0.0;
};

std::vector<ScoredRating> ToScored(std::span<const Rating> ratings);

struct BehaviorDistribution {
  static constexpr double kBinWidth = 0.1;

  std::string behavior_id;
  // Integer inputs: counts per score level. Real inputs: histogram keyed by
  // bin index k covering [k * 0.1, (k + 1) * 0.1).
  bool integral = true;
  std::map<int, std::size_t> counts;
  std::map<std::int64_t, std::size_t> histogram;
  std::size_t n = 0;
  double mean = 0.0;
};

// Throws kMixedBehaviors when ratings reference more than one behavior.
BehaviorDistribution ComputeDistribution(std::span<const Rating> ratings);
BehaviorDistribution ComputeDistribution(std::span<const ScoredRating> ratings);

std::int64_t HistogramBin(double score);

struct ControllerSplit {
  std::vector<double> first_party;
  std::vector<double> third_party;
};

// Partitions scores by the controller class of their behavior. Throws
// kUnknownBehavior for ratings whose behavior is not in `behaviors`.
ControllerSplit SplitByController(
    std::span<const ScoredRating> ratings,
    const std::map<std::string, DataAccessBehavior, std::less<>>& behaviors);

// Per-app AppScore over `ratings`, apps ordered by id. Apps without ratings
// are omitted.
std::vector<AppScore> ScoreApps(
    std::span<const ScoredRating> ratings,
    const std::map<std::string, DataAccessBehavior, std::less<>>& behaviors);

void to_json(nlohmann::json& j, const AppScore& v);
void to_json(nlohmann::json& j, const BehaviorDistribution& v);

// scores.json / scores.csv: app_id, score, mode, n.
nlohmann::json ScoresToJson(std::span<const AppScore> scores);
std::string ScoresToCsv(std::span<const AppScore> scores);

}  // namespace depra

#endif  // DEPRA_RATING_H_
