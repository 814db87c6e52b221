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

#ifndef DEPRA_STATS_H_
#define DEPRA_STATS_H_

// Rank and agreement statistics: Mann-Whitney U, Spearman's rho,
// Krippendorff's ordinal alpha, and the user-versus-expert comparison.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/model.h"
#include "depra/rating.h"

namespace depra::stats {

// Average (mid) ranks, 1-based, for `values` in their original order.
std::vector<double> AverageRanks(std::span<const double> values);

enum class UMethod { kAuto, kExact, kApprox };

struct UTestResult {
  double u = 0.0;  // U of sample1: R1 - n1 (n1 + 1) / 2
  double z = 0.0;  // tie-corrected, continuity-corrected normal score
  double p_two_sided = 1.0;
  double effect_r = 0.0;  // |z| / sqrt(n1 + n2)
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool exact = false;
};

inline constexpr std::size_t kExactUThreshold = 400;

// kAuto uses the exact permutation distribution (ties held at their mid
// ranks) when n1 * n2 <= 400, otherwise the normal approximation. Throws
// kEmptySample.
UTestResult MannWhitneyU(std::span<const double> sample1,
                         std::span<const double> sample2,
                         UMethod method = UMethod::kAuto);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;  // two-sided, t approximation with n - 2 df
  std::size_t n = 0;
};

// Throws kLengthMismatch, kInsufficientData (n < 3) or kDegenerateInput
// (a constant input has no rank variance).
SpearmanResult Spearman(std::span<const double> x, std::span<const double> y);

struct AlphaResult {
  double alpha = 0.0;
  std::size_t n_items = 0;   // pairable items (>= 2 values)
  std::size_t n_raters = 0;  // matrix columns
  std::size_t n_pairable_values = 0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
};

// items x raters; nullopt marks a missing cell.
using ReliabilityMatrix = std::vector<std::vector<std::optional<double>>>;

// Ordinal-metric alpha from the coincidence matrix. Every present value
// must equal one of `levels` (ordered low to high). Throws
// kInsufficientData (fewer than two items with two or more values),
// kConstantData (one distinct value overall) or kInvalidArgument.
AlphaResult KrippendorffAlphaOrdinal(const ReliabilityMatrix& matrix,
                                     std::span<const double> levels);

struct ItemComparison {
  std::string behavior_id;
  std::string app_id;
  bool first_party = true;
  double user_mean = 0.0;
  std::size_t user_n = 0;
  double expert_mean = 0.0;
  std::size_t expert_n = 0;
};

struct GroupMeans {
  double user_mean = 0.0;
  double expert_mean = 0.0;
  std::size_t n_items = 0;
};

struct ComparisonReport {
  std::vector<ItemComparison> items;  // ordered by behavior_id
  std::optional<SpearmanResult> spearman;
  std::string spearman_note;  // why rho is undefined, when it is
  GroupMeans overall;
  GroupMeans first_party;
  GroupMeans third_party;
  std::optional<AlphaResult> expert_alpha;
  std::string expert_alpha_note;
};

// Per-item means over behaviors rated by both groups, Spearman's rho
// between the mean vectors, rating-level group means overall and per
// controller class, and the expert panel's ordinal alpha. Throws
// kNoOverlap when no behavior was rated by both groups.
ComparisonReport CompareUserExpert(
    std::span<const ScoredRating> user_ratings,
    std::span<const ScoredRating> expert_ratings,
    const std::map<std::string, DataAccessBehavior, std::less<>>& behaviors);

void to_json(nlohmann::json& j, const UTestResult& v);
void to_json(nlohmann::json& j, const SpearmanResult& v);
void to_json(nlohmann::json& j, const AlphaResult& v);
void to_json(nlohmann::json& j, const ComparisonReport& v);
std::string ComparisonToCsv(const ComparisonReport& report);

}  // namespace depra::stats

#endif  // DEPRA_STATS_H_
