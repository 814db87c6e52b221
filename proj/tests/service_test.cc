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

#include "depra/service.h"

#include <gtest/gtest.h>

#include "depra/scoring.h"
#include "depra/synth.h"
#include "httplib.h"
#include "test_util.h"

namespace depra {
namespace {

using testing::TempDir;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { Open(MakeStudyFixture()); }

  void Open(Deployment deployment, ServiceOptions options = Defaults()) {
    service_.reset();
    store_.reset();
    store_ = std::make_unique<Store>(Store::Options{
        dir_ / "events.jsonl", dir_ / "snapshot.json", 500});
    deployment_ = std::make_shared<Deployment>(std::move(deployment));
    service_ = std::make_unique<RatingService>(*store_, deployment_,
                                               std::move(options));
  }

  static ServiceOptions Defaults() {
    ServiceOptions o;
    o.calibration = CalibrationParams(0.6, 0.5);
    o.clock = [] { return std::int64_t{1700000000000}; };
    return o;
  }

  HttpResponse Call(const std::string& method, const std::string& path,
                    const nlohmann::json& body = nullptr,
                    std::map<std::string, std::string> query = {}) {
    return service_->Handle(
        {method, path, std::move(query), body.is_null() ? "" : body.dump()});
  }

  std::string NewSession(const std::string& rater) {
    auto r = Call("POST", "/v1/sessions", {{"rater_id", rater}});
    EXPECT_EQ(r.status, 201) << r.body;
    return r.json()["session_id"];
  }

  nlohmann::json RatingsFor(const std::string& app, int score) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto* b : deployment_->ServedBehaviors(app)) {
      items.push_back({{"behavior_id", b->behavior_id}, {"score", score}});
    }
    return {{"ratings", items}};
  }

  void RateEverything(const std::string& session, int score) {
    for (const auto& app : deployment_->apps()) {
      auto r = Call("POST", "/v1/sessions/" + session + "/ratings",
                    RatingsFor(app.app_id, score));
      ASSERT_EQ(r.status, 200) << r.body;
    }
  }

  HttpResponse Survey(const std::string& session,
                      std::vector<std::string> answers) {
    return Call("POST", "/v1/sessions/" + session + "/survey",
                {{"risk_answers", answers}, {"responses", {{"age", "x"}}}});
  }

  TempDir dir_;
  std::unique_ptr<Store> store_;
  std::shared_ptr<Deployment> deployment_;
  std::unique_ptr<RatingService> service_;
};

TEST_F(ServiceTest, HealthGlossarySurvey) {
  auto h = Call("GET", "/v1/health");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.json()["ready"], true);
  auto g = Call("GET", "/v1/glossary");
  EXPECT_EQ(g.json(), GlossaryToJson(DefaultGlossary()));
  auto s = Call("GET", "/v1/survey").json();
  EXPECT_EQ(s["risk_items"].size(), 4u);
  EXPECT_EQ(Call("GET", "/v1/nope").status, 404);
  EXPECT_EQ(Call("DELETE", "/v1/health").status, 405);
}

TEST_F(ServiceTest, SixCategoriesInSelectionOrder) {
  auto r = Call("GET", "/v1/categories");
  ASSERT_EQ(r.status, 200);
  auto cats = r.json()["categories"];
  ASSERT_EQ(cats.size(), 6u);
  EXPECT_EQ(cats[0]["category_id"], "weather-forecast");
  EXPECT_EQ(cats[0]["apps"].size(), 3u);
  EXPECT_EQ(cats[0]["apps"][0]["app_id"], "skycast");
  EXPECT_EQ(cats[0]["apps"][1]["app_id"], "rainradar");
  for (const auto& c : cats) {
    EXPECT_GE(c["apps"].size(), 1u);
    EXPECT_LE(c["apps"].size(), 3u);
  }
}

TEST_F(ServiceTest, NotReadyWithoutDeployment) {
  service_->set_deployment(nullptr);
  EXPECT_EQ(Call("GET", "/v1/categories").status, 503);
  EXPECT_EQ(Call("GET", "/v1/categories").json()["error"], "NotReady");
  EXPECT_EQ(Call("GET", "/v1/health").json()["ready"], false);
}

TEST_F(ServiceTest, SeventyEightQuestionsAcrossThirteenApps) {
  std::size_t total = 0;
  for (const auto& app : deployment_->apps()) {
    auto r = Call("GET", "/v1/apps/" + app.app_id);
    ASSERT_EQ(r.status, 200);
    auto j = r.json();
    EXPECT_EQ(j["questions"].size(), 6u);
    for (const auto& q : j["questions"]) {
      EXPECT_FALSE(q["header"].get<std::string>().empty());
      EXPECT_FALSE(q["body"].get<std::string>().empty());
    }
    total += j["questions"].size();
  }
  EXPECT_EQ(deployment_->apps().size(), 13u);
  EXPECT_EQ(total, 78u);
  EXPECT_EQ(Call("GET", "/v1/apps/ghost").status, 404);
  EXPECT_EQ(Call("GET", "/v1/apps/ghost").json()["error"], "UnknownApp");
}

TEST_F(ServiceTest, RejectedExplanationHidesQuestion) {
  Deployment d = MakeStudyFixture();
  const std::string id = d.ServedBehaviors("skycast")[0]->behavior_id;
  ApplyVerdict(d.mutable_behaviors(), id, "rev", Verdict::Reject());
  Open(std::move(d));
  auto j = Call("GET", "/v1/apps/skycast").json();
  EXPECT_EQ(j["questions"].size(), 5u);
  const std::string s = NewSession("u1");
  auto r = Call("POST", "/v1/sessions/" + s + "/ratings",
                {{"ratings", {{{"behavior_id", id}, {"score", 1}}}}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.json()["rejected"][0]["error"], "UnknownBehavior");
  EXPECT_EQ(Call("GET", "/v1/sessions/" + s).json()["progress"]["total"], 77);
}

TEST_F(ServiceTest, SessionCreateAndResume) {
  auto first = Call("POST", "/v1/sessions", {{"rater_id", "u1"}});
  EXPECT_EQ(first.status, 201);
  auto again = Call("POST", "/v1/sessions", {{"rater_id", "u1"}});
  EXPECT_EQ(again.status, 200);
  EXPECT_EQ(again.json()["session_id"], first.json()["session_id"]);
  auto anon = Call("POST", "/v1/sessions");
  EXPECT_EQ(anon.status, 201);
  EXPECT_NE(anon.json()["rater_id"], "");
  auto view = first.json();
  EXPECT_EQ(view["status"], "active");
  EXPECT_EQ(view["progress"]["total"], 78);
  EXPECT_EQ(view["progress"]["answered"], 0);
  EXPECT_EQ(view["progress"]["cursor"], 0);
  EXPECT_EQ(view["survey"]["unlocked"], false);
  // 78 questions plus one checkpoint per category.
  EXPECT_EQ(view["items"].size(), 84u);
  EXPECT_EQ(Call("GET", "/v1/sessions/nope").status, 404);
}

TEST_F(ServiceTest, BatchOfSixAdvancesCursor) {
  const std::string s = NewSession("u1");
  auto r = Call("POST", "/v1/sessions/" + s + "/ratings",
                RatingsFor("skycast", 1));
  ASSERT_EQ(r.status, 200) << r.body;
  auto j = r.json();
  EXPECT_EQ(j["accepted"], 6);
  EXPECT_EQ(j["replaced"], 0);
  EXPECT_EQ(j["session"]["progress"]["answered"], 6);
  EXPECT_EQ(j["session"]["progress"]["cursor"], 6);
  r = Call("POST", "/v1/sessions/" + s + "/ratings", RatingsFor("skycast", -1));
  EXPECT_EQ(r.json()["replaced"], 6);
  EXPECT_EQ(r.json()["session"]["progress"]["answered"], 6);
}

TEST_F(ServiceTest, OutOfRangeScorePartiallyAccepted) {
  const std::string s = NewSession("u1");
  auto body = RatingsFor("skycast", 1);
  body["ratings"][2]["score"] = 5;
  body["ratings"][4]["score"] = 1.5;
  auto r = Call("POST", "/v1/sessions/" + s + "/ratings", body);
  ASSERT_EQ(r.status, 422);
  auto j = r.json();
  EXPECT_EQ(j["error"], "ValidationFailed");
  EXPECT_EQ(j["accepted"], 4);
  ASSERT_EQ(j["rejected"].size(), 2u);
  EXPECT_EQ(j["rejected"][0]["index"], 2);
  EXPECT_EQ(j["rejected"][0]["error"], "OutOfRangeScore");
  EXPECT_EQ(j["rejected"][0]["behavior_id"], body["ratings"][2]["behavior_id"]);
  EXPECT_EQ(
      store_->state()->FindSession(s)->ratings.size(), 4u);
}

TEST_F(ServiceTest, AttentionCheckByCategoryName) {
  DeploymentCategory weather;
  weather.category_id = "weather";
  weather.name = "Weather";
  weather.app_ids = {"w"};
  DeploymentCategory social;
  social.category_id = "social";
  social.name = "Social";
  social.app_ids = {"s"};
  AppRecord w, so;
  w.app_id = "w";
  so.app_id = "s";
  Open(Deployment({weather, social}, {w, so}, {}));
  const std::string s = NewSession("u1");
  auto r = Call("POST", "/v1/sessions/" + s + "/attention",
                {{"checkpoint_id", "attn-weather"}, {"answer", " weather "}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["passed"], true);
  EXPECT_EQ(r.json()["status"], "active");
  r = Call("POST", "/v1/sessions/" + s + "/attention",
           {{"checkpoint_id", "attn-weather"}, {"answer", "Weather"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"], "AlreadyAnswered");
  r = Call("POST", "/v1/sessions/" + s + "/attention",
           {{"checkpoint_id", "attn-nope"}, {"answer", "Weather"}});
  EXPECT_EQ(r.status, 404);
  r = Call("POST", "/v1/sessions/" + s + "/attention",
           {{"checkpoint_id", "attn-social"}, {"answer", "Weather"}});
  EXPECT_EQ(r.json()["passed"], false);
  EXPECT_EQ(r.json()["status"], "flagged");
}

TEST_F(ServiceTest, AttentionItemsFollowEachCategory) {
  const std::string s = NewSession("u1");
  auto items = Call("GET", "/v1/sessions/" + s).json()["items"];
  std::vector<std::string> names;
  for (const auto& c : deployment_->categories()) names.push_back(c.name);
  std::sort(names.begin(), names.end());
  std::string previous_category;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i]["kind"] == "attention") {
      EXPECT_EQ(items[i]["options"], nlohmann::json(names));
      EXPECT_FALSE(items[i].contains("expected_answer"));
      EXPECT_EQ(items[i - 1]["category_id"], items[i]["category_id"]);
      if (i + 1 < items.size()) {
        EXPECT_NE(items[i + 1]["category_id"], items[i]["category_id"]);
      }
    }
  }
}

TEST_F(ServiceTest, FlaggedSessionRatingsExcluded) {
  const std::string good = NewSession("good");
  const std::string bad = NewSession("bad");
  const auto ids = deployment_->ServedBehaviors("skycast");
  Call("POST", "/v1/sessions/" + good + "/ratings",
       {{"ratings", {{{"behavior_id", ids[0]->behavior_id}, {"score", -1}},
                     {{"behavior_id", ids[1]->behavior_id}, {"score", 2}}}}});
  Call("POST", "/v1/sessions/" + bad + "/attention",
       {{"checkpoint_id", "attn-weather-forecast"}, {"answer", "Messaging"}});
  auto r = Call("POST", "/v1/sessions/" + bad + "/ratings",
                {{"ratings",
                  {{{"behavior_id", ids[2]->behavior_id}, {"score", -2}},
                   {{"behavior_id", ids[3]->behavior_id}, {"score", 9}}}}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"], "SessionFlagged");
  EXPECT_EQ(r.json()["excluded"], true);
  // The valid item is stored but never counted.
  EXPECT_EQ(store_->state()->FindSession(bad)->ratings.size(), 1u);

  auto score = Call("GET", "/v1/apps/skycast/score").json();
  EXPECT_EQ(score["score"], -1.0);
  EXPECT_EQ(score["mode"], "negative_sum");
  EXPECT_EQ(score["n"], 2);
  auto exported = Call("GET", "/v1/exports/ratings").json();
  EXPECT_EQ(exported["ratings"].size(), 2u);
  EXPECT_EQ(exported["excluded_sessions"], nlohmann::json({bad}));
}

TEST_F(ServiceTest, ScoreErrors) {
  EXPECT_EQ(Call("GET", "/v1/apps/skycast/score").status, 404);
  EXPECT_EQ(Call("GET", "/v1/apps/skycast/score").json()["error"], "NoRatings");
  EXPECT_EQ(Call("GET", "/v1/apps/ghost/score").json()["error"], "UnknownApp");
  const std::string s = NewSession("u1");
  Call("POST", "/v1/sessions/" + s + "/ratings", RatingsFor("skycast", 1));
  auto r = Call("GET", "/v1/apps/skycast/score", nullptr,
                {{"calibrated", "true"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"], "MissingProfile");
  EXPECT_EQ(Call("GET", "/v1/apps/skycast/score", nullptr,
                 {{"calibrated", "maybe"}})
                .status,
            400);
  ServiceOptions no_cal = Defaults();
  no_cal.calibration.reset();
  Open(MakeStudyFixture(), no_cal);
  r = Call("GET", "/v1/apps/skycast/score", nullptr, {{"calibrated", "true"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"], "CalibrationUnconfigured");
}

TEST_F(ServiceTest, SurveyLockedUntilQuestionsDone) {
  const std::string s = NewSession("u1");
  auto r = Survey(s, {"A", "A", "A", "A"});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"], "SurveyLocked");
  RateEverything(s, -2);
  EXPECT_EQ(Call("GET", "/v1/sessions/" + s).json()["survey"]["unlocked"],
            true);
  EXPECT_EQ(Survey(s, {"A", "A"}).status, 422);
  EXPECT_EQ(Survey(s, {"A", "A"}).json()["error"], "IncompleteSurvey");
  r = Survey(s, {"A", "A", "A", "A"});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["risk_class"], "averse");
  EXPECT_EQ(r.json()["status"], "completed");
}

TEST_F(ServiceTest, AllAverseCalibratedShift) {
  for (int u = 0; u < 3; ++u) {
    const std::string s = NewSession("u" + std::to_string(u));
    RateEverything(s, -2);
    ASSERT_EQ(Survey(s, {"A", "A", "A", "A"}).status, 200);
  }
  auto raw = Call("GET", "/v1/apps/skycast/score").json();
  auto cal = Call("GET", "/v1/apps/skycast/score", nullptr,
                  {{"calibrated", "true"}})
                 .json();
  EXPECT_EQ(raw["score"], -36.0);
  EXPECT_NEAR(cal["score"].get<double>(), 18 * -1.7, 1e-12);
  EXPECT_EQ(cal["calibrated"], true);

  auto table = Call("GET", "/v1/exports/calibrated").json();
  for (const auto& row : table["ratings"]) {
    EXPECT_NEAR(row["calibrated"].get<double>() - row["raw"].get<double>(),
                0.3, 1e-12);
  }
  EXPECT_NEAR(table["overall"]["mean_shift"].get<double>(), 0.3, 1e-12);
}

TEST_F(ServiceTest, ScoreEqualsLibraryOnExport) {
  for (int u = 0; u < 4; ++u) {
    const std::string s = NewSession("u" + std::to_string(u));
    for (const auto& app : deployment_->apps()) {
      Call("POST", "/v1/sessions/" + s + "/ratings",
           RatingsFor(app.app_id, (u + static_cast<int>(app.app_id.size())) %
                                          5 -
                                      2));
    }
  }
  auto exported = Call("GET", "/v1/exports/ratings").json();
  std::map<std::string, std::vector<double>> by_app;
  for (const auto& r : exported["ratings"]) {
    const auto* b = deployment_->FindBehavior(r["behavior_id"].get<std::string>());
    by_app[b->app_id].push_back(r["score"].get<int>());
  }
  for (const auto& [app, scores] : by_app) {
    auto expected = ComputeAppScore(app, scores);
    auto got = Call("GET", "/v1/apps/" + app + "/score").json();
    EXPECT_EQ(got["score"].get<double>(), expected.score) << app;
    EXPECT_EQ(got["n"], expected.n);
  }
  auto csv = Call("GET", "/v1/exports/scores", nullptr, {{"format", "csv"}});
  EXPECT_EQ(csv.content_type, "text/csv");
  EXPECT_EQ(csv.body.rfind("app_id,score,mode,n\n", 0), 0u);
}

TEST_F(ServiceTest, ReportsAndExports) {
  for (int u = 0; u < 3; ++u) {
    const std::string s = NewSession("u" + std::to_string(u));
    RateEverything(s, u - 1);
    Survey(s, {"B", "B", "A", "A"});
  }
  auto dist = Call("GET", "/v1/reports/distributions");
  ASSERT_EQ(dist.status, 200) << dist.body;
  EXPECT_EQ(dist.json()["distributions"].size(), 78u);
  EXPECT_EQ(Call("GET", "/v1/reports/comparison").json()["error"],
            "ExpertsUnconfigured");
  EXPECT_EQ(Call("GET", "/v1/exports/profiles").json()["profiles"].size(), 3u);
  EXPECT_EQ(Call("GET", "/v1/exports/nope").status, 404);
  EXPECT_EQ(
      Call("GET", "/v1/exports/ratings", nullptr, {{"format", "xml"}}).status,
      400);

  auto experts = GenerateExpertRatings({}, deployment_->behaviors());
  std::vector<nlohmann::json> lines;
  for (const auto& r : experts) lines.push_back(r);
  testing::WriteJsonLines(dir_ / "experts.jsonl", lines);
  ServiceOptions with_experts = Defaults();
  with_experts.experts = dir_ / "experts.jsonl";
  Open(MakeStudyFixture(), with_experts);
  auto cmp = Call("GET", "/v1/reports/comparison");
  ASSERT_EQ(cmp.status, 200) << cmp.body;
  EXPECT_EQ(cmp.json()["items"].size(), 78u);
  auto cmp_csv = Call("GET", "/v1/reports/comparison", nullptr,
                      {{"format", "csv"}});
  EXPECT_EQ(cmp_csv.content_type, "text/csv");
}

TEST_F(ServiceTest, MalformedBodyIsBadRequest) {
  const std::string s = NewSession("u1");
  auto r = service_->Handle(
      {"POST", "/v1/sessions/" + s + "/ratings", {}, "{not json"});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(Call("POST", "/v1/sessions/" + s + "/ratings", {{"x", 1}}).status,
            400);
}

TEST_F(ServiceTest, HttpServerRoundTrip) {
  HttpServer server(*service_);
  const int port = server.Start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/v1/sessions", R"({"rater_id":"net"})",
                         "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  auto j = nlohmann::json::parse(res->body);
  res = client.Get("/v1/apps/skycast/score?calibrated=false");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = client.Get("/v1/sessions/" + j["session_id"].get<std::string>());
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_NE(res->get_header_value("Content-Type").find("application/json"),
            std::string::npos);
  server.Stop();
}

}  // namespace
}  // namespace depra
