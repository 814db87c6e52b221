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

#include "depra/rating.h"

#include <algorithm>
#include <cmath>

#include "depra/error.h"
#include "depra/io.h"

namespace depra {

std::string_view ScoreModeName(ScoreMode mode) {
  return mode == ScoreMode::kNegativeSum ? "negative_sum"
                                         : "non_negative_mean";
}

AppScore ComputeAppScore(std::string app_id, std::span<const double> scores) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyRatings, "no ratings for app " + app_id);
  }
  AppScore out;
  out.app_id = std::move(app_id);
  out.n = scores.size();
  // Summing in sorted order makes the result independent of input order.
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  double negative_sum = 0.0;
  double total = 0.0;
  bool any_negative = false;
  for (double s : sorted) {
    total += s;
    if (s < 0.0) {
      any_negative = true;
      negative_sum += s;
    }
  }
  if (any_negative) {
    out.mode = ScoreMode::kNegativeSum;
    out.score = negative_sum;
  } else {
    out.mode = ScoreMode::kNonNegativeMean;
    out.score = total / static_cast<double>(scores.size());
  }
  return out;
}

std::vector<ScoredRating> ToScored(std::span<const Rating> ratings) {
  std::vector<ScoredRating> out;
  out.reserve(ratings.size());
  for (const auto& r : ratings) {
    out.push_back({r.rater_id, r.behavior_id, static_cast<double>(r.score)});
  }
  return out;
}

std::int64_t HistogramBin(double score) {
  // Nudge values sitting on a bin edge (e.g. -1.7) into the bin they start.
  return static_cast<std::int64_t>(
      std::floor(score / BehaviorDistribution::kBinWidth + 1e-9));
}

BehaviorDistribution ComputeDistribution(std::span<const Rating> ratings) {
  BehaviorDistribution d;
  if (ratings.empty()) return d;
  d.behavior_id = ratings.front().behavior_id;
  double total = 0.0;
  for (const auto& r : ratings) {
    if (r.behavior_id != d.behavior_id) {
      throw Error(ErrorCode::kMixedBehaviors,
                  "ratings mix behaviors " + d.behavior_id + " and " +
                      r.behavior_id);
    }
    ++d.counts[r.score];
    total += r.score;
  }
  d.n = ratings.size();
  d.mean = total / static_cast<double>(d.n);
  return d;
}

BehaviorDistribution ComputeDistribution(
    std::span<const ScoredRating> ratings) {
  BehaviorDistribution d;
  if (ratings.empty()) return d;
  d.behavior_id = ratings.front().behavior_id;
  bool integral = true;
  for (const auto& r : ratings) {
    if (r.behavior_id != d.behavior_id) {
      throw Error(ErrorCode::kMixedBehaviors,
                  "ratings mix behaviors " + d.behavior_id + " and " +
                      r.behavior_id);
    }
    if (r.score != std::floor(r.score)) integral = false;
  }
  d.integral = integral;
  std::vector<double> sorted;
  sorted.reserve(ratings.size());
  for (const auto& r : ratings) {
    sorted.push_back(r.score);
    if (integral) {
      ++d.counts[static_cast<int>(r.score)];
    } else {
      ++d.histogram[HistogramBin(r.score)];
    }
  }
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double s : sorted) total += s;
  d.n = ratings.size();
  d.mean = total / static_cast<double>(d.n);
  return d;
}

ControllerSplit SplitByController(
    std::span<const ScoredRating> ratings,
    const std::map<std::string, DataAccessBehavior, std::less<>>& behaviors) {
  ControllerSplit split;
  for (const auto& r : ratings) {
    auto it = behaviors.find(r.behavior_id);
    if (it == behaviors.end()) {
      throw Error(ErrorCode::kUnknownBehavior,
                  "unknown behavior " + r.behavior_id);
    }
    if (it->second.controller.is_first_party()) {
      split.first_party.push_back(r.score);
    } else {
      split.third_party.push_back(r.score);
    }
  }
  return split;
}

std::vector<AppScore> ScoreApps(
    std::span<const ScoredRating> ratings,
    const std::map<std::string, DataAccessBehavior, std::less<>>& behaviors) {
  std::map<std::string, std::vector<double>> by_app;
  for (const auto& r : ratings) {
    auto it = behaviors.find(r.behavior_id);
    if (it == behaviors.end()) {
      throw Error(ErrorCode::kUnknownBehavior,
                  "unknown behavior " + r.behavior_id);
    }
    by_app[it->second.app_id].push_back(r.score);
  }
  std::vector<AppScore> out;
  for (const auto& [app_id, scores] : by_app) {
    out.push_back(ComputeAppScore(app_id, scores));
  }
  return out;
}

void to_json(nlohmann::json& j, const AppScore& v) {
  j = {{"app_id", v.app_id},
       {"score", v.score},
       {"mode", ScoreModeName(v.mode)},
       {"n", v.n}};
}

void to_json(nlohmann::json& j, const BehaviorDistribution& v) {
  j = {{"behavior_id", v.behavior_id},
       {"n", v.n},
       {"mean", v.mean},
       {"integral", v.integral}};
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [level, c] : v.counts) counts[std::to_string(level)] = c;
  j["counts"] = counts;
  if (!v.integral) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& [bin, c] : v.histogram) {
      bins.push_back({{"lower", static_cast<double>(bin) *
                                    BehaviorDistribution::kBinWidth},
                      {"count", c}});
    }
    j["histogram"] = bins;
    j["bin_width"] = BehaviorDistribution::kBinWidth;
  }
}

nlohmann::json ScoresToJson(std::span<const AppScore> scores) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : scores) arr.push_back(s);
  return {{"scores", arr}};
}

std::string ScoresToCsv(std::span<const AppScore> scores) {
  std::string out = "app_id,score,mode,n\n";
  for (const auto& s : scores) {
    out += io::CsvField(s.app_id) + "," + io::FormatDouble(s.score) + "," +
           std::string(ScoreModeName(s.mode)) + "," + std::to_string(s.n) +
           "\n";
  }
  return out;
}

}  // namespace depra
