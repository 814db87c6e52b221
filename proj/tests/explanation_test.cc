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

#include "depra/explanation.h"

#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <regex>
#include <thread>

#include "httplib.h"
#include "test_util.h"

namespace depra {
namespace {

using testing::CodeOf;

DataAccessBehavior Behavior(std::string app_id, DataType type,
                            std::string permission,
                            ControllerClass controller) {
  DataAccessBehavior b;
  b.app_id = std::move(app_id);
  b.data_type = type;
  b.permission = std::move(permission);
  b.controller = controller;
  b.purpose_type = controller.purpose_type();
  b.call_chain = {"com.example.Main.onCreate", "com.example.Service.fetch"};
  b.behavior_id = MakeBehaviorId(b.app_id, b.data_type, b.purpose_type);
  return b;
}

AppRecord WeatherApp() {
  AppRecord a;
  a.app_id = "weather";
  a.package_name = "com.example.weather";
  a.title = "Weather Now";
  a.description = "Local forecasts, radar maps and severe weather alerts.";
  a.market_category = "Weather";
  a.declared_permissions = {"ACCESS_FINE_LOCATION"};
  return a;
}

TEST(RenderHeader, ExamplesFromTemplate) {
  EXPECT_EQ(RenderHeader(Behavior("weather", DataType::kLocation,
                                  "ACCESS_FINE_LOCATION",
                                  ControllerClass::FirstParty())),
            "Precise location for app features");
  EXPECT_EQ(RenderHeader(Behavior(
                "weather", DataType::kLocation, "ACCESS_FINE_LOCATION",
                ControllerClass::ThirdParty(SdkCategory::kAdvertisement))),
            "Precise location for advertising related services");
  EXPECT_EQ(RenderHeader(Behavior("scanner", DataType::kCamera, "CAMERA",
                                  ControllerClass::FirstParty())),
            "Camera for app features");
  EXPECT_EQ(FriendlyDataName("ACCESS_COARSE_LOCATION"),
            "Approximate location");
}

TEST(RenderHeader, PureAndBounded) {
  for (DataType t : kAllDataTypes) {
    for (auto p : PermissionsOf(t)) {
      for (SdkCategory s : kAllSdkCategories) {
        auto b = Behavior("x", t, std::string(p),
                          ControllerClass::ThirdParty(s));
        const std::string h = RenderHeader(b);
        EXPECT_EQ(h, RenderHeader(b));
        EXPECT_LE(h.size(), PurposeExplanation::kMaxHeaderLength) << h;
      }
    }
  }
}

class MockClient : public ExplanationClient {
 public:
  explicit MockClient(std::string reply) : reply_(std::move(reply)) {}
  std::string Explain(const ExplanationRequest& request) override {
    std::lock_guard lock(mu_);
    requests.push_back(request);
    if (fail) throw Error(*fail, "mock failure");
    return reply_;
  }
  std::optional<ErrorCode> fail;
  std::vector<ExplanationRequest> requests;

 private:
  std::mutex mu_;
  std::string reply_;
};

TEST(GenerateExplanation, ClientBodyPassesThroughUnverified) {
  MockClient client("Used to show the weather where you are.");
  auto b = Behavior("weather", DataType::kLocation, "ACCESS_FINE_LOCATION",
                    ControllerClass::FirstParty());
  auto e = GenerateExplanation(b, WeatherApp(), &client, {});
  EXPECT_EQ(e.body, "Used to show the weather where you are.");
  EXPECT_EQ(e.header, "Precise location for app features");
  EXPECT_FALSE(e.verified);
  EXPECT_EQ(e.provenance, "client");
}

TEST(GenerateExplanation, RequestCarriesChainAndDescription) {
  MockClient client("x");
  auto b = Behavior("weather", DataType::kLocation, "ACCESS_FINE_LOCATION",
                    ControllerClass::FirstParty());
  GenerateExplanation(b, WeatherApp(), &client, {});
  ASSERT_EQ(client.requests.size(), 1u);
  const auto& r = client.requests[0];
  EXPECT_EQ(r.call_chain, b.call_chain);
  EXPECT_EQ(r.app_description, WeatherApp().description);
  EXPECT_EQ(r.data_type, "LOCATION");
  EXPECT_EQ(r.controller, "first_party");
  EXPECT_EQ(r.sdk_category, "");
  EXPECT_EQ(r.purpose_type, "app");
  EXPECT_EQ(r.behavior_id, "weather:LOCATION:app");
  nlohmann::json j = r;
  EXPECT_EQ(j.get<ExplanationRequest>().call_chain, b.call_chain);
}

TEST(GenerateExplanation, ClientFailureFallsBack) {
  for (ErrorCode code :
       {ErrorCode::kClientTimeout, ErrorCode::kClientRejected}) {
    MockClient client("unused");
    client.fail = code;
    auto b = Behavior("weather", DataType::kLocation, "ACCESS_FINE_LOCATION",
                      ControllerClass::FirstParty());
    auto e = GenerateExplanation(b, WeatherApp(), &client, {});
    EXPECT_FALSE(e.verified);
    EXPECT_EQ(e.body, FallbackBody(b, {}));
    EXPECT_EQ(e.provenance.rfind("fallback: " +
                                     std::string(ErrorCodeName(code)),
                                 0),
              0u)
        << e.provenance;
  }
}

TEST(GenerateExplanation, NoClientUsesFallback) {
  auto b = Behavior("weather", DataType::kLocation, "ACCESS_FINE_LOCATION",
                    ControllerClass::ThirdParty(SdkCategory::kAdvertisement));
  auto e = GenerateExplanation(b, WeatherApp(), nullptr, {});
  EXPECT_NE(e.body.find("precise location"), std::string::npos) << e.body;
  EXPECT_NE(e.body.find("advertising"), std::string::npos) << e.body;
  EXPECT_EQ(e.provenance, "fallback: no client configured");
}

TEST(FallbackBody, NeverContainsRawPermissionIds) {
  std::vector<std::string> all;
  for (DataType t : kAllDataTypes) {
    for (auto p : PermissionsOf(t)) all.emplace_back(p);
  }
  const std::regex raw("[A-Z]{2,}_[A-Z_]+|android\\.permission");
  const std::vector<std::string> keywords = {"radar", "forecast"};
  for (DataType t : kAllDataTypes) {
    for (auto p : PermissionsOf(t)) {
      std::vector<ControllerClass> controllers = {
          ControllerClass::FirstParty()};
      for (SdkCategory s : kAllSdkCategories) {
        controllers.push_back(ControllerClass::ThirdParty(s));
      }
      for (const auto& c : controllers) {
        const auto body =
            FallbackBody(Behavior("x", t, std::string(p), c), keywords);
        EXPECT_FALSE(std::regex_search(body, raw)) << body;
        for (const auto& id : all) {
          EXPECT_EQ(body.find(id), std::string::npos) << id << ": " << body;
        }
      }
    }
  }
}

TEST(GenerateExplanations, BoundedParallelFillsEveryBehavior) {
  MockClient client("body");
  std::vector<DataAccessBehavior> behaviors;
  for (DataType t : kAllDataTypes) {
    behaviors.push_back(Behavior("weather", t, std::string(PermissionsOf(t)[0]),
                                 ControllerClass::FirstParty()));
  }
  std::map<std::string, AppRecord> apps = {{"weather", WeatherApp()}};
  GenerateExplanations(behaviors, apps, &client, {}, 3);
  EXPECT_EQ(client.requests.size(), behaviors.size());
  for (const auto& b : behaviors) {
    EXPECT_EQ(b.explanation.body, "body");
    EXPECT_EQ(b.explanation.header, RenderHeader(b));
  }
}

TEST(ApplyVerdict, ApproveEditRejectAudited) {
  testing::TempDir dir;
  const auto audit = dir / "audit.jsonl";
  std::vector<DataAccessBehavior> behaviors = {
      Behavior("a", DataType::kCamera, "CAMERA", ControllerClass::FirstParty()),
      Behavior("b", DataType::kCamera, "CAMERA", ControllerClass::FirstParty()),
      Behavior("c", DataType::kCamera, "CAMERA",
               ControllerClass::FirstParty())};
  for (auto& b : behaviors) {
    b.explanation = GenerateExplanation(b, AppRecord{}, nullptr, {});
  }
  EXPECT_TRUE(ApplyVerdict(behaviors, "a:CAMERA:app", "rev", Verdict::Approve(),
                           audit)
                  .verified);
  const auto& edited = ApplyVerdict(behaviors, "b:CAMERA:app", "rev",
                                    Verdict::Edit("clarified text"), audit);
  EXPECT_TRUE(edited.verified);
  EXPECT_EQ(edited.body, "clarified text");
  EXPECT_EQ(edited.provenance, "edited by rev");
  EXPECT_FALSE(ApplyVerdict(behaviors, "c:CAMERA:app", "rev",
                            Verdict::Reject(), audit)
                   .verified);
  EXPECT_EQ(CodeOf([&] {
              ApplyVerdict(behaviors, "zzz", "rev", Verdict::Approve(), audit);
            }),
            ErrorCode::kUnknownExplanation);

  std::vector<std::string> verdicts;
  std::istringstream lines(testing::ReadFile(audit));
  for (std::string line; std::getline(lines, line);) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["reviewer"], "rev");
    verdicts.push_back(j["verdict"]);
  }
  EXPECT_EQ(verdicts,
            (std::vector<std::string>{"approve", "edit", "reject"}));
}

TEST(Glossary, DefaultMatchesShippedFile) {
  auto shipped = LoadGlossary(DEPRA_GLOSSARY_PATH);
  auto builtin = DefaultGlossary();
  EXPECT_EQ(GlossaryToJson(shipped), GlossaryToJson(builtin));
  bool has_imei = false;
  for (const auto& e : builtin) {
    has_imei |= e.term == "IMEI";
    EXPECT_FALSE(e.definition.empty()) << e.term;
  }
  EXPECT_TRUE(has_imei);
}

class FakeExplainer {
 public:
  FakeExplainer() {
    server_.Post("/explain", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      last_auth_ = req.get_header_value("Authorization");
      auto j = nlohmann::json::parse(req.body);
      const std::string app = j.at("app_id");
      if (app == "reject") {
        res.status = 422;
        res.set_content("{}", "application/json");
        return;
      }
      if (app == "nobody") {
        res.set_content("{}", "application/json");
        return;
      }
      res.set_content(nlohmann::json{{"body", "about " + app}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeExplainer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }
  std::string last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::string last_auth_;
};

TEST(HttpExplanationClient, WireContract) {
  FakeExplainer fake;
  HttpExplanationClient client(fake.url(), "/explain", "tok");
  ExplanationRequest request;
  request.app_id = "weather";
  EXPECT_EQ(client.Explain(request), "about weather");
  EXPECT_EQ(fake.last_auth(), "Bearer tok");
  request.app_id = "reject";
  EXPECT_EQ(CodeOf([&] { client.Explain(request); }),
            ErrorCode::kClientRejected);
  request.app_id = "nobody";
  EXPECT_EQ(CodeOf([&] { client.Explain(request); }),
            ErrorCode::kClientRejected);
}

TEST(HttpExplanationClient, UnreachableIsTimeout) {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpExplanationClient client("http://127.0.0.1:" + std::to_string(port),
                               "/explain", "", std::chrono::milliseconds(500));
  EXPECT_EQ(CodeOf([&] { client.Explain(ExplanationRequest{}); }),
            ErrorCode::kClientTimeout);
}

}  // namespace
}  // namespace depra
