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

#include "depra/ingestion.h"

#include <gtest/gtest.h>

#include <random>

#include "depra/text.h"
#include "test_util.h"

namespace depra {
namespace {

using testing::CodeOf;
using testing::Description;
using testing::TempDir;
using testing::WriteJsonLines;

nlohmann::json AppJson(const std::string& id, const std::string& description,
                       std::vector<std::string> permissions = {}) {
  return {{"app_id", id},
          {"package_name", "com.example." + id},
          {"title", id},
          {"description", description},
          {"install_count", 1000},
          {"market_category", "Weather"},
          {"declared_permissions", permissions}};
}

TEST(LoadCorpus, ShortDescriptionDropped) {
  TempDir dir;
  WriteJsonLines(dir / "apps.jsonl",
                 {AppJson("a", Description({"forecast", "rain"})),
                  AppJson("short", "the weather and the rain for you today "
                                   "with alerts")});
  Corpus c = LoadCorpus(dir.path());
  ASSERT_EQ(c.apps.size(), 1u);
  EXPECT_EQ(c.apps[0].app_id, "a");
  ASSERT_EQ(c.drop_report.dropped.size(), 1u);
  EXPECT_EQ(c.drop_report.dropped[0].app_id, "short");
  EXPECT_EQ(c.drop_report.dropped[0].reason, "short_description");
  EXPECT_EQ(c.drop_report.dropped[0].word_count, 10u);
  EXPECT_EQ(c.drop_report.short_descriptions, 1u);
}

TEST(LoadCorpus, ThirtyWordsIsEnough) {
  TempDir dir;
  WriteJsonLines(dir / "apps.jsonl",
                 {AppJson("a", Description({"forecast"}, 30)),
                  AppJson("b", Description({"forecast"}, 29))});
  Corpus c = LoadCorpus(dir.path());
  ASSERT_EQ(c.apps.size(), 1u);
  EXPECT_EQ(c.apps[0].app_id, "a");
}

TEST(LoadCorpus, EmptyDirectory) {
  TempDir dir;
  EXPECT_EQ(CodeOf([&] { LoadCorpus(dir.path()); }), ErrorCode::kEmptyCorpus);
  testing::WriteFile(dir / "apps.jsonl", "\n");
  EXPECT_EQ(CodeOf([&] { LoadCorpus(dir.path()); }), ErrorCode::kEmptyCorpus);
}

TEST(LoadCorpus, ThreeValidApps) {
  TempDir dir;
  WriteJsonLines(dir / "apps.jsonl",
                 {AppJson("c", Description({"radar"})),
                  AppJson("a", Description({"forecast"})),
                  AppJson("b", Description({"storm"}))});
  Corpus c = LoadCorpus(dir.path());
  ASSERT_EQ(c.apps.size(), 3u);
  EXPECT_EQ(c.apps[0].app_id, "a");
  EXPECT_EQ(c.apps[2].app_id, "c");
  EXPECT_TRUE(c.drop_report.dropped.empty());
}

TEST(LoadCorpus, NonEnglishDropped) {
  TempDir dir;
  std::string german;
  for (int i = 0; i < 40; ++i) german += "wettervorhersage regenradar ";
  WriteJsonLines(dir / "apps.jsonl", {AppJson("a", Description({"radar"})),
                                      AppJson("de", german)});
  Corpus c = LoadCorpus(dir.path());
  ASSERT_EQ(c.apps.size(), 1u);
  EXPECT_EQ(c.drop_report.non_english, 1u);
  EXPECT_EQ(c.drop_report.dropped[0].reason, "non_english");
}

TEST(LoadCorpus, MalformedLineNamesTheLine) {
  TempDir dir;
  testing::WriteFile(dir / "apps.jsonl",
                     AppJson("a", Description({"x"})).dump() + "\n{oops\n");
  try {
    LoadCorpus(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRecord);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos)
        << e.what();
  }
  WriteJsonLines(dir / "apps.jsonl", {{{"app_id", "x"}}});
  EXPECT_EQ(CodeOf([&] { LoadCorpus(dir.path()); }),
            ErrorCode::kMalformedRecord);
}

TEST(LoadCorpus, ChainsOfDroppedAppsDiscarded) {
  TempDir dir;
  WriteJsonLines(dir / "apps.jsonl",
                 {AppJson("a", Description({"forecast"}),
                          {"ACCESS_FINE_LOCATION"}),
                  AppJson("short", "tiny", {"ACCESS_FINE_LOCATION"})});
  nlohmann::json chain = {{"app_id", "a"},
                          {"sensitive_api", "getLastKnownLocation"},
                          {"chain", {"com.example.a.Main"}},
                          {"permission", "android.permission.ACCESS_FINE_LOCATION"}};
  auto dropped = chain;
  dropped["app_id"] = "short";
  auto orphan = chain;
  orphan["app_id"] = "ghost";
  WriteJsonLines(dir / "callchains.jsonl", {chain, dropped, orphan});
  WriteJsonLines(dir / "thirdparty_db.jsonl",
                 {{{"package_prefix", "com.adnet"},
                   {"sdk_category", "Advertisement"}}});
  Corpus c = LoadCorpus(dir.path());
  ASSERT_EQ(c.call_chains.size(), 1u);
  EXPECT_EQ(c.call_chains[0].permission, "ACCESS_FINE_LOCATION");
  EXPECT_EQ(c.drop_report.orphan_call_chains, 1u);
  EXPECT_EQ(c.third_party_db.size(), 1u);
}

CallChainRecord Chain(std::string last, std::string permission =
                                            "ACCESS_FINE_LOCATION") {
  return {"weather", "getLastKnownLocation",
          {"com.example.weather.Main.onCreate", std::move(last)},
          std::move(permission)};
}

ThirdPartyDb AdDb() {
  return ThirdPartyDb({{"com.adnet", SdkCategory::kAdvertisement, "AdNet"},
                       {"com.adnet.maps", SdkCategory::kMap, "AdNet Maps"}});
}

TEST(ClassifyController, NoMatchIsFirstParty) {
  EXPECT_TRUE(
      ClassifyController(Chain("com.example.weather.ForecastService"), AdDb())
          .is_first_party());
}

TEST(ClassifyController, PrefixMatchIsThirdParty) {
  EXPECT_EQ(ClassifyController(Chain("com.adnet.sdk.Loader"), AdDb()),
            ControllerClass::ThirdParty(SdkCategory::kAdvertisement));
}

TEST(ClassifyController, LongestPrefixWins) {
  EXPECT_EQ(ClassifyController(Chain("com.adnet.maps.Tile"), AdDb()),
            ControllerClass::ThirdParty(SdkCategory::kMap));
}

TEST(ClassifyController, PrefixRespectsPackageBoundary) {
  EXPECT_TRUE(ClassifyController(Chain("com.adnetwork.X"), AdDb())
                  .is_first_party());
  EXPECT_FALSE(ClassifyController(Chain("com.adnet"), AdDb()).is_first_party());
}

TEST(ClassifyController, MatchesLongestPrefixOracle) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> parts = {"a", "b", "c"};
  for (int round = 0; round < 200; ++round) {
    std::vector<ThirdPartyEntry> entries;
    std::set<std::string> prefixes;
    for (int i = 0; i < 5; ++i) {
      std::string p = parts[rng() % 3];
      const int depth = static_cast<int>(rng() % 3);
      for (int d = 0; d < depth; ++d) p += "." + parts[rng() % 3];
      if (prefixes.insert(p).second) {
        entries.push_back(
            {p, kAllSdkCategories[rng() % kAllSdkCategories.size()], p});
      }
    }
    ThirdPartyDb db(entries);
    std::string unit = parts[rng() % 3];
    for (int d = 0; d < 3; ++d) unit += "." + parts[rng() % 3];
    const ThirdPartyEntry* best = nullptr;
    for (const auto& e : entries) {
      const bool match = unit == e.package_prefix ||
                         unit.rfind(e.package_prefix + ".", 0) == 0;
      if (match && (!best || e.package_prefix.size() >
                                 best->package_prefix.size())) {
        best = &e;
      }
    }
    auto got = ClassifyController(Chain(unit), db);
    if (!best) {
      EXPECT_TRUE(got.is_first_party()) << unit;
    } else {
      EXPECT_EQ(got, ControllerClass::ThirdParty(best->category)) << unit;
    }
  }
}

TEST(ThirdPartyDb, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(ThirdPartyDb({{"x", SdkCategory::kMap, ""},
                             {"x", SdkCategory::kPayment, ""}}),
               Error);
  EXPECT_THROW(ThirdPartyDb({{"", SdkCategory::kMap, ""}}), Error);
}

AppRecord WeatherApp() {
  AppRecord a;
  a.app_id = "weather";
  a.declared_permissions = {"ACCESS_FINE_LOCATION",
                            "ACCESS_COARSE_LOCATION"};
  NormalizeApp(a);
  return a;
}

TEST(BuildBehaviors, SameTripleDeduplicated) {
  std::vector<CallChainRecord> records = {
      Chain("com.example.weather.A"),
      Chain("com.example.weather.B", "ACCESS_COARSE_LOCATION")};
  auto build = BuildBehaviors(WeatherApp(), records, AdDb());
  ASSERT_EQ(build.behaviors.size(), 1u);
  EXPECT_EQ(build.behaviors[0].behavior_id, "weather:LOCATION:app");
  EXPECT_TRUE(build.issues.empty());
}

TEST(BuildBehaviors, DifferentPurposesRatedSeparately) {
  std::vector<CallChainRecord> records = {Chain("com.example.weather.A"),
                                          Chain("com.adnet.sdk.Loader")};
  auto build = BuildBehaviors(WeatherApp(), records, AdDb());
  ASSERT_EQ(build.behaviors.size(), 2u);
  std::set<std::string> ids;
  for (const auto& b : build.behaviors) {
    ids.insert(b.behavior_id);
    EXPECT_NO_THROW(ValidateBehavior(b));
    EXPECT_FALSE(b.explanation.verified);
  }
  EXPECT_EQ(ids, (std::set<std::string>{"weather:LOCATION:ads",
                                        "weather:LOCATION:app"}));
}

TEST(BuildBehaviors, UndeclaredPermissionReported) {
  std::vector<CallChainRecord> records = {
      Chain("com.example.weather.Cam", "CAMERA"),
      Chain("com.example.weather.Net", "INTERNET")};
  auto build = BuildBehaviors(WeatherApp(), records, AdDb());
  EXPECT_TRUE(build.behaviors.empty());
  ASSERT_EQ(build.issues.size(), 2u);
  EXPECT_EQ(build.issues[0].code, ErrorCode::kPermissionNotDeclared);
  EXPECT_EQ(build.issues[0].record_index, 0u);
}

TEST(BuildBehaviors, ForeignRecordRejected) {
  auto record = Chain("com.example.weather.A");
  record.app_id = "other";
  std::vector<CallChainRecord> records = {record};
  EXPECT_THROW(BuildBehaviors(WeatherApp(), records, AdDb()), Error);
}

TEST(Text, TokensAndHeuristics) {
  EXPECT_EQ(text::RawTokens("Café-Radar, 2 NOW!"),
            (std::vector<std::string>{"cafe", "radar", "2", "now"}));
  EXPECT_EQ(text::WordCount("  a b\tc\n"), 3u);
  EXPECT_TRUE(text::IsStopWord("the"));
  EXPECT_FALSE(text::IsStopWord("vpn"));
  EXPECT_EQ(text::StopWordRatio(""), 0.0);
  EXPECT_TRUE(text::LooksEnglish(Description({"forecast"})));
}

}  // namespace
}  // namespace depra
