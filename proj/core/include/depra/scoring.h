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

#ifndef DEPRA_SCORING_H_
#define DEPRA_SCORING_H_

// Score and report computations over replayed session state. The service
// endpoints and the command-line tool both go through these functions, so
// the two always agree.

#include <optional>
#include <string>
#include <vector>

#include "depra/calibration.h"
#include "depra/rating.h"
#include "depra/stats.h"
#include "depra/store.h"

namespace depra {

struct RatingDataset {
  std::vector<Rating> ratings;  // ordered by (rater_id, behavior_id)
  ProfileMap profiles;
  std::vector<std::string> excluded_sessions;  // flagged, sorted
  std::size_t excluded_ratings = 0;
};

// Ratings and profiles from every session that is not Flagged. A flagged
// session is dropped whole.
RatingDataset CollectDataset(const StoreState& state);

// Raw scores, or calibrated ones when `calibration` is set (throws
// kMissingProfile for raters who never submitted the survey).
std::vector<ScoredRating> DatasetScores(
    const RatingDataset& dataset,
    const std::optional<CalibrationParams>& calibration);

// AppScore for every app with at least one rating, ordered by app_id.
std::vector<AppScore> ScoreAllApps(
    const RatingDataset& dataset, const BehaviorMap& behaviors,
    const std::optional<CalibrationParams>& calibration);

// Throws kNotFound when the app has no usable ratings.
AppScore ScoreOneApp(const RatingDataset& dataset,
                     const BehaviorMap& behaviors, std::string_view app_id,
                     const std::optional<CalibrationParams>& calibration);

// Per-behavior distributions for every rated behavior, ordered by id.
std::vector<BehaviorDistribution> DatasetDistributions(
    const RatingDataset& dataset,
    const std::optional<CalibrationParams>& calibration);

// Distributions plus the first-party versus third-party U test.
nlohmann::json DistributionsReport(
    const RatingDataset& dataset, const BehaviorMap& behaviors,
    const std::optional<CalibrationParams>& calibration);

// Expert ratings file: JSON lines of {rater_id, behavior_id, score}.
std::vector<ScoredRating> LoadExpertRatings(const std::filesystem::path& path);

stats::ComparisonReport ComparisonForDataset(
    const RatingDataset& dataset, std::span<const ScoredRating> experts,
    const BehaviorMap& behaviors,
    const std::optional<CalibrationParams>& calibration);

std::string RatingsToCsv(std::span<const Rating> ratings);

}  // namespace depra

#endif  // DEPRA_SCORING_H_
