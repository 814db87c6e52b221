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

#include "depra/selection.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.h"

namespace depra {
namespace {

AppRecord App(std::string id, std::vector<std::string> permissions,
              std::int64_t installs) {
  AppRecord a;
  a.app_id = std::move(id);
  a.declared_permissions = std::move(permissions);
  a.install_count = installs;
  NormalizeApp(a);
  return a;
}

TEST(SelectRepresentatives, InstallTieBreak) {
  std::vector<AppRecord> apps = {App("A", {"p1", "p2"}, 100),
                                 App("B", {"p1", "p2"}, 500),
                                 App("C", {"p3"}, 1)};
  auto result = SelectRepresentatives("c", apps);
  EXPECT_EQ(result.selected_app_ids, (std::vector<std::string>{"B", "C"}));
  ASSERT_EQ(result.coverage_trace.size(), 2u);
  EXPECT_EQ(result.coverage_trace[0].newly_covered,
            (std::vector<std::string>{"p1", "p2"}));
  EXPECT_EQ(result.coverage_trace[0].install_count, 500);
  EXPECT_EQ(result.universal_permissions,
            (std::vector<std::string>{"p1", "p2", "p3"}));
}

TEST(SelectRepresentatives, DominantAppAlone) {
  std::vector<AppRecord> apps = {
      App("partial1", {"p1"}, 10'000), App("all", {"p1", "p2", "p3"}, 1),
      App("partial2", {"p2", "p3"}, 5'000)};
  EXPECT_EQ(SelectRepresentatives("c", apps).selected_app_ids,
            std::vector<std::string>{"all"});
}

TEST(SelectRepresentatives, NoPermissions) {
  std::vector<AppRecord> apps = {App("a", {}, 1), App("b", {}, 2)};
  auto result = SelectRepresentatives("c", apps);
  EXPECT_TRUE(result.no_permissions);
  EXPECT_TRUE(result.selected_app_ids.empty());
}

TEST(SelectRepresentatives, RandomInstancesAgainstBruteForce) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 300; ++round) {
    auto apps = oracle::RandomSelectionInstance(rng, 12, 10);
    auto result = SelectRepresentatives("c", apps);
    std::set<std::string> universe, covered;
    for (const auto& a : apps) {
      universe.insert(a.declared_permissions.begin(),
                      a.declared_permissions.end());
    }
    for (const auto& step : result.coverage_trace) {
      EXPECT_FALSE(step.newly_covered.empty());
      for (const auto& p : step.newly_covered) {
        EXPECT_TRUE(covered.insert(p).second) << "covered twice: " << p;
      }
    }
    EXPECT_EQ(covered, universe);
    EXPECT_EQ(std::vector<std::string>(universe.begin(), universe.end()),
              result.universal_permissions);
    const std::size_t opt = oracle::MinimumCoverSize(apps);
    const double bound =
        (1.0 + std::log(static_cast<double>(std::max<std::size_t>(
                   universe.size(), 1)))) *
        static_cast<double>(opt);
    EXPECT_LE(static_cast<double>(result.selected_app_ids.size()),
              bound + 1e-12);

    auto shuffled = apps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(SelectRepresentatives("c", shuffled), result);
  }
}

TEST(SelectRepresentatives, JsonRoundTrip) {
  std::vector<AppRecord> apps = {App("A", {"p1", "p2"}, 100),
                                 App("C", {"p3"}, 1)};
  auto result = SelectRepresentatives("cl", apps);
  EXPECT_EQ(nlohmann::json(result).get<SelectionResult>(), result);
}

}  // namespace
}  // namespace depra
