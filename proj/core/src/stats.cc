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

#include "depra/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "depra/error.h"
#include "depra/io.h"

namespace depra::stats {
namespace {

// Twice the mid rank of each value, as integers: a tie block occupying
// 0-based positions [i, j) has mid rank (i + 1 + j) / 2.
std::vector<std::int64_t> DoubledRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<std::int64_t> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const auto doubled = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = doubled;
    i = j;
  }
  return ranks;
}

// Sum over tie blocks of (t^3 - t).
double TieTerm(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double term = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    term += t * t * t - t;
    i = j;
  }
  return term;
}

// Two-sided exact p: the share of size-k subsets of the pooled doubled
// ranks whose doubled U lies at least as far from its mean as observed.
double ExactUPValue(const std::vector<std::int64_t>& pooled_ranks,
                    std::size_t k, std::int64_t observed_rank_sum) {
  std::int64_t max_sum = 0;
  for (auto r : pooled_ranks) max_sum += r;
  // counts[m][s]: number of m-subsets with doubled rank sum s.
  std::vector<std::vector<double>> counts(
      k + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  counts[0][0] = 1.0;
  std::int64_t running = 0;
  for (std::size_t idx = 0; idx < pooled_ranks.size(); ++idx) {
    const std::int64_t r = pooled_ranks[idx];
    running += r;
    const std::size_t top = std::min(k, idx + 1);
    for (std::size_t m = top; m >= 1; --m) {
      auto& dst = counts[m];
      const auto& src = counts[m - 1];
      for (std::int64_t s = running; s >= r; --s) {
        const double c = src[static_cast<std::size_t>(s - r)];
        if (c != 0.0) dst[static_cast<std::size_t>(s)] += c;
      }
    }
  }
  // Doubled U = doubled rank sum - k (k + 1); its mean is k * (N - k).
  const auto kk = static_cast<std::int64_t>(k);
  const auto other = static_cast<std::int64_t>(pooled_ranks.size()) - kk;
  const std::int64_t offset = kk * (kk + 1);
  const std::int64_t mean2 = kk * other;
  const std::int64_t observed_dev =
      std::llabs(observed_rank_sum - offset - mean2);
  double extreme = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < counts[k].size(); ++s) {
    const double c = counts[k][s];
    if (c == 0.0) continue;
    total += c;
    const std::int64_t dev =
        std::llabs(static_cast<std::int64_t>(s) - offset - mean2);
    if (dev >= observed_dev) extreme += c;
  }
  return std::min(1.0, extreme / total);
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double v : sorted) total += v;
  return total / static_cast<double>(sorted.size());
}

}  // namespace

std::vector<double> AverageRanks(std::span<const double> values) {
  auto doubled = DoubledRanks(values);
  std::vector<double> out(doubled.size());
  for (std::size_t i = 0; i < doubled.size(); ++i) {
    out[i] = static_cast<double>(doubled[i]) / 2.0;
  }
  return out;
}

UTestResult MannWhitneyU(std::span<const double> sample1,
                         std::span<const double> sample2, UMethod method) {
  if (sample1.empty() || sample2.empty()) {
    throw Error(ErrorCode::kEmptySample,
                "Mann-Whitney U needs two non-empty samples");
  }
  UTestResult out;
  out.n1 = sample1.size();
  out.n2 = sample2.size();
  const double n1 = static_cast<double>(out.n1);
  const double n2 = static_cast<double>(out.n2);
  const double n = n1 + n2;

  std::vector<double> pooled(sample1.begin(), sample1.end());
  pooled.insert(pooled.end(), sample2.begin(), sample2.end());
  const auto ranks = DoubledRanks(pooled);
  std::int64_t rank_sum1 = 0;
  for (std::size_t i = 0; i < out.n1; ++i) rank_sum1 += ranks[i];
  const auto k1 = static_cast<std::int64_t>(out.n1);
  out.u = static_cast<double>(rank_sum1 - k1 * (k1 + 1)) / 2.0;

  const double mu = n1 * n2 / 2.0;
  const double variance =
      n1 * n2 / 12.0 * ((n + 1.0) - TieTerm(pooled) / (n * (n - 1.0)));
  const double deviation = out.u - mu;
  if (variance > 0.0 && std::fabs(deviation) > 0.5) {
    out.z = (deviation - std::copysign(0.5, deviation)) / std::sqrt(variance);
  }
  out.effect_r = std::fabs(out.z) / std::sqrt(n);

  const bool exact =
      method == UMethod::kExact ||
      (method == UMethod::kAuto && out.n1 * out.n2 <= kExactUThreshold);
  if (exact) {
    out.exact = true;
    out.p_two_sided = ExactUPValue(ranks, out.n1, rank_sum1);
  } else {
    out.p_two_sided =
        std::min(1.0, std::erfc(std::fabs(out.z) / std::sqrt(2.0)));
  }
  return out;
}

SpearmanResult Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "Spearman inputs differ in length (" +
                    std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::kInsufficientData,
                "Spearman needs at least 3 paired observations");
  }
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // mean of ranks, with or without ties
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kDegenerateInput,
                "Spearman rho undefined: an input has no rank variance");
  }
  SpearmanResult out;
  out.n = x.size();
  out.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::fabs(out.rho) >= 1.0) {
    out.p = 0.0;
  } else if (out.n > 2) {
    const double df = n - 2.0;
    const double t =
        out.rho * std::sqrt(df / (1.0 - out.rho * out.rho));
    boost::math::students_t dist(df);
    out.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                                    dist, std::fabs(t))));
  }
  return out;
}

AlphaResult KrippendorffAlphaOrdinal(const ReliabilityMatrix& matrix,
                                     std::span<const double> levels) {
  if (levels.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "ordinal alpha needs at least two levels");
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i - 1] < levels[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "levels must be strictly increasing");
    }
  }
  auto level_index = [&](double v) -> std::size_t {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (std::fabs(levels[i] - v) <= 1e-9) return i;
    }
    throw Error(ErrorCode::kInvalidArgument,
                "value " + io::FormatDouble(v) + " is not a declared level");
  };

  const std::size_t L = levels.size();
  std::vector<std::vector<double>> coincidence(L, std::vector<double>(L, 0.0));
  AlphaResult out;
  for (const auto& row : matrix) {
    out.n_raters = std::max(out.n_raters, row.size());
    std::vector<std::size_t> values;
    for (const auto& cell : row) {
      if (cell) values.push_back(level_index(*cell));
    }
    if (values.size() < 2) continue;
    ++out.n_items;
    out.n_pairable_values += values.size();
    const double weight = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = 0; b < values.size(); ++b) {
        if (a != b) coincidence[values[a]][values[b]] += weight;
      }
    }
  }
  if (out.n_items < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "alpha needs at least two items with two or more ratings");
  }

  std::vector<double> marginal(L, 0.0);
  for (std::size_t c = 0; c < L; ++c) {
    for (std::size_t k = 0; k < L; ++k) marginal[c] += coincidence[c][k];
  }
  const double total = static_cast<double>(out.n_pairable_values);
  const auto used = std::count_if(marginal.begin(), marginal.end(),
                                  [](double m) { return m > 0.0; });
  if (used < 2) {
    throw Error(ErrorCode::kConstantData,
                "alpha undefined: every pairable value is identical");
  }

  // Ordinal squared distance between levels c <= k.
  auto delta2 = [&](std::size_t c, std::size_t k) {
    if (c > k) std::swap(c, k);
    double span = 0.0;
    for (std::size_t g = c; g <= k; ++g) span += marginal[g];
    const double d = span - (marginal[c] + marginal[k]) / 2.0;
    return d * d;
  };

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < L; ++c) {
    for (std::size_t k = 0; k < L; ++k) {
      if (c == k) continue;
      const double d2 = delta2(c, k);
      observed += coincidence[c][k] * d2;
      expected += marginal[c] * marginal[k] * d2;
    }
  }
  out.observed_disagreement = observed / total;
  out.expected_disagreement = expected / (total * (total - 1.0));
  out.alpha = 1.0 - (total - 1.0) * observed / expected;
  return out;
}

ComparisonReport CompareUserExpert(
    std::span<const ScoredRating> user_ratings,
    std::span<const ScoredRating> expert_ratings,
    const std::map<std::string, DataAccessBehavior, std::less<>>& behaviors) {
  std::map<std::string, std::vector<double>> user_by_item, expert_by_item;
  for (const auto& r : user_ratings) {
    user_by_item[r.behavior_id].push_back(r.score);
  }
  for (const auto& r : expert_ratings) {
    expert_by_item[r.behavior_id].push_back(r.score);
  }

  ComparisonReport report;
  std::vector<double> user_all, expert_all, user_fp, expert_fp, user_tp,
      expert_tp;
  std::vector<double> user_means, expert_means;
  for (const auto& [id, user_scores] : user_by_item) {
    auto ex = expert_by_item.find(id);
    if (ex == expert_by_item.end()) continue;
    auto b = behaviors.find(id);
    if (b == behaviors.end()) {
      throw Error(ErrorCode::kUnknownBehavior, "unknown behavior " + id);
    }
    ItemComparison item;
    item.behavior_id = id;
    item.app_id = b->second.app_id;
    item.first_party = b->second.controller.is_first_party();
    item.user_mean = Mean(user_scores);
    item.user_n = user_scores.size();
    item.expert_mean = Mean(ex->second);
    item.expert_n = ex->second.size();
    report.items.push_back(item);
    user_means.push_back(item.user_mean);
    expert_means.push_back(item.expert_mean);

    auto& user_group = item.first_party ? user_fp : user_tp;
    auto& expert_group = item.first_party ? expert_fp : expert_tp;
    user_group.insert(user_group.end(), user_scores.begin(), user_scores.end());
    expert_group.insert(expert_group.end(), ex->second.begin(),
                        ex->second.end());
    user_all.insert(user_all.end(), user_scores.begin(), user_scores.end());
    expert_all.insert(expert_all.end(), ex->second.begin(), ex->second.end());
    ++(item.first_party ? report.first_party : report.third_party).n_items;
  }
  if (report.items.empty()) {
    throw Error(ErrorCode::kNoOverlap,
                "users and experts rated no behavior in common");
  }
  report.overall = {Mean(user_all), Mean(expert_all), report.items.size()};
  report.first_party.user_mean = Mean(user_fp);
  report.first_party.expert_mean = Mean(expert_fp);
  report.third_party.user_mean = Mean(user_tp);
  report.third_party.expert_mean = Mean(expert_tp);

  try {
    report.spearman = Spearman(user_means, expert_means);
  } catch (const Error& e) {
    report.spearman_note = std::string(ErrorCodeName(e.code())) + ": " +
                           e.what();
  }

  // Expert panel agreement over the shared items.
  std::set<std::string> experts;
  for (const auto& r : expert_ratings) experts.insert(r.rater_id);
  std::map<std::string, std::size_t> column;
  for (const auto& e : experts) column.emplace(e, column.size());
  std::map<std::string, std::size_t> row;
  for (const auto& item : report.items) row.emplace(item.behavior_id, row.size());
  ReliabilityMatrix matrix(row.size(),
                           std::vector<std::optional<double>>(column.size()));
  for (const auto& r : expert_ratings) {
    auto it = row.find(r.behavior_id);
    if (it != row.end()) matrix[it->second][column[r.rater_id]] = r.score;
  }
  std::vector<double> levels;
  {
    std::set<double> seen;
    for (int s = kMinScore; s <= kMaxScore; ++s) seen.insert(s);
    for (const auto& r : expert_ratings) seen.insert(r.score);
    levels.assign(seen.begin(), seen.end());
  }
  try {
    report.expert_alpha = KrippendorffAlphaOrdinal(matrix, levels);
  } catch (const Error& e) {
    report.expert_alpha_note = std::string(ErrorCodeName(e.code())) + ": " +
                               e.what();
  }
  return report;
}

void to_json(nlohmann::json& j, const UTestResult& v) {
  j = {{"u", v.u},   {"z", v.z},   {"p_two_sided", v.p_two_sided},
       {"effect_r", v.effect_r}, {"n1", v.n1}, {"n2", v.n2},
       {"exact", v.exact}};
}

void to_json(nlohmann::json& j, const SpearmanResult& v) {
  j = {{"rho", v.rho}, {"p", v.p}, {"n", v.n}};
}

void to_json(nlohmann::json& j, const AlphaResult& v) {
  j = {{"alpha", v.alpha},
       {"metric", "ordinal"},
       {"n_items", v.n_items},
       {"n_raters", v.n_raters},
       {"n_pairable_values", v.n_pairable_values},
       {"observed_disagreement", v.observed_disagreement},
       {"expected_disagreement", v.expected_disagreement}};
}

namespace {
nlohmann::json GroupJson(const GroupMeans& g) {
  return {{"user_mean", g.user_mean},
          {"expert_mean", g.expert_mean},
          {"n_items", g.n_items}};
}
}  // namespace

void to_json(nlohmann::json& j, const ComparisonReport& v) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : v.items) {
    items.push_back({{"behavior_id", it.behavior_id},
                     {"app_id", it.app_id},
                     {"controller", it.first_party ? "first_party"
                                                   : "third_party"},
                     {"user_mean", it.user_mean},
                     {"user_n", it.user_n},
                     {"expert_mean", it.expert_mean},
                     {"expert_n", it.expert_n}});
  }
  j = {{"items", items},
       {"n_items", v.items.size()},
       {"overall", GroupJson(v.overall)},
       {"by_controller",
        {{"first_party", GroupJson(v.first_party)},
         {"third_party", GroupJson(v.third_party)}}}};
  j["spearman"] = v.spearman ? nlohmann::json(*v.spearman) : nlohmann::json();
  if (!v.spearman_note.empty()) j["spearman_note"] = v.spearman_note;
  j["expert_alpha"] =
      v.expert_alpha ? nlohmann::json(*v.expert_alpha) : nlohmann::json();
  if (!v.expert_alpha_note.empty()) {
    j["expert_alpha_note"] = v.expert_alpha_note;
  }
}

std::string ComparisonToCsv(const ComparisonReport& report) {
  std::string out =
      "behavior_id,app_id,controller,user_mean,user_n,expert_mean,expert_n\n";
  for (const auto& it : report.items) {
    out += io::CsvField(it.behavior_id) + "," + io::CsvField(it.app_id) + "," +
           (it.first_party ? "first_party" : "third_party") + "," +
           io::FormatDouble(it.user_mean) + "," + std::to_string(it.user_n) +
           "," + io::FormatDouble(it.expert_mean) + "," +
           std::to_string(it.expert_n) + "\n";
  }
  return out;
}

}  // namespace depra::stats
