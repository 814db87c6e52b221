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

#ifndef DEPRA_SERVICE_H_
#define DEPRA_SERVICE_H_

// The /v1 rating API. RatingService maps a request to a response without
// any network code, so handlers are testable in-process; HttpServer mounts
// it on a listening socket.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "depra/config.h"
#include "depra/deployment.h"
#include "depra/explanation.h"
#include "depra/store.h"

namespace depra {

struct HttpRequest {
  std::string method;  // "GET" | "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

struct ServiceOptions {
  std::optional<CalibrationParams> calibration;
  AttentionPlacement attention = AttentionPlacement::kPerCategory;
  std::filesystem::path experts;
  std::vector<GlossaryEntry> glossary = DefaultGlossary();
  // Milliseconds since the epoch; defaults to the system clock.
  std::function<std::int64_t()> clock;
};

// One attention checkpoint: shown after the last question of its category
// and answered by naming that category.
struct AttentionCheckpoint {
  std::string checkpoint_id;
  std::string category_id;
  std::string expected_answer;  // never sent to clients
};

std::vector<AttentionCheckpoint> AttentionCheckpoints(
    const Deployment& deployment, AttentionPlacement placement);

// The four-scenario risk survey plus optional free-text items.
nlohmann::json SurveySchema();

class RatingService {
 public:
  RatingService(Store& store, std::shared_ptr<const Deployment> deployment,
                ServiceOptions options);

  HttpResponse Handle(const HttpRequest& request);

  void set_deployment(std::shared_ptr<const Deployment> deployment);
  std::shared_ptr<const Deployment> deployment() const;

 private:
  HttpResponse GetCategories();
  HttpResponse GetApp(const std::string& app_id);
  HttpResponse GetAppScore(const std::string& app_id,
                           const HttpRequest& request);
  HttpResponse CreateSession(const HttpRequest& request);
  HttpResponse GetSession(const std::string& session_id);
  HttpResponse PostRatings(const std::string& session_id,
                           const HttpRequest& request);
  HttpResponse PostSurvey(const std::string& session_id,
                          const HttpRequest& request);
  HttpResponse PostAttention(const std::string& session_id,
                             const HttpRequest& request);
  HttpResponse GetComparison(const HttpRequest& request);
  HttpResponse GetDistributions(const HttpRequest& request);
  HttpResponse Export(const std::string& what, const HttpRequest& request);

  nlohmann::json SessionView(const SessionState& session,
                             const Deployment& deployment) const;
  bool QuestionsDone(const SessionState& session,
                     const Deployment& deployment) const;
  std::int64_t Now() const;
  std::string NewId(std::string_view prefix);

  Store& store_;
  ServiceOptions options_;
  mutable std::mutex deployment_mu_;
  std::shared_ptr<const Deployment> deployment_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

// Thin httplib wrapper. Start binds (port 0 picks a free port), serves on a
// background thread and returns the bound port.
class HttpServer {
 public:
  explicit HttpServer(RatingService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int Start(const std::string& host, int port);
  // Blocks until Stop is called from another thread or a signal handler.
  void Wait();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace depra

#endif  // DEPRA_SERVICE_H_
