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

#include <algorithm>
#include <cctype>
#include <chrono>
#include <set>

#include "depra/calibration.h"
#include "depra/error.h"
#include "depra/explanation.h"
#include "depra/scoring.h"

namespace depra {
namespace {

HttpResponse Json(int status, const nlohmann::json& body) {
  return {status, "application/json", body.dump(2) + "\n"};
}

HttpResponse Problem(int status, std::string_view error,
                     std::string_view message,
                     nlohmann::json extra = nlohmann::json::object()) {
  extra["error"] = error;
  extra["message"] = message;
  return Json(status, extra);
}

HttpResponse Text(int status, std::string content_type, std::string body) {
  return {status, std::move(content_type), std::move(body)};
}

std::vector<std::string> SplitPath(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) out.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string Lower(std::string_view s) {
  std::string out;
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

// "true"/"1" or "false"/"0"; absent means false.
std::optional<bool> QueryBool(const HttpRequest& request,
                              const std::string& key) {
  auto it = request.query.find(key);
  if (it == request.query.end() || it->second.empty()) return false;
  const std::string v = Lower(it->second);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  return std::nullopt;
}

std::string QueryFormat(const HttpRequest& request) {
  auto it = request.query.find("format");
  return it == request.query.end() ? "json" : Lower(it->second);
}

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownBehavior:
    case ErrorCode::kUnknownRater:
      return 404;
    case ErrorCode::kMissingProfile:
    case ErrorCode::kNoOverlap:
    case ErrorCode::kMissingPrerequisite:
      return 409;
    case ErrorCode::kIoError:
    case ErrorCode::kCorruptLog:
      return 500;
    default:
      return 422;
  }
}

std::string ProblemName(ErrorCode code) {
  return std::string(ErrorCodeName(code));
}

nlohmann::json QuestionJson(const DataAccessBehavior& b) {
  return {{"behavior_id", b.behavior_id},
          {"app_id", b.app_id},
          {"data_type", b.data_type},
          {"purpose_type", b.purpose_type},
          {"controller", b.controller},
          {"header", b.explanation.header},
          {"body", b.explanation.body}};
}

std::vector<RiskAnswer> ParseAnswers(const nlohmann::json& j) {
  std::vector<RiskAnswer> out;
  for (const auto& a : j) out.push_back(a.get<RiskAnswer>());
  return out;
}

}  // namespace

std::vector<AttentionCheckpoint> AttentionCheckpoints(
    const Deployment& deployment, AttentionPlacement placement) {
  std::vector<AttentionCheckpoint> out;
  if (placement == AttentionPlacement::kNone) return out;
  for (const auto& c : deployment.categories()) {
    out.push_back({"attn-" + c.category_id, c.category_id, c.name});
  }
  return out;
}

nlohmann::json SurveySchema() {
  auto item = [](int n, std::string prompt, std::string a, std::string b,
                 std::string frame) {
    return nlohmann::json{{"id", "risk_" + std::to_string(n)},
                          {"frame", frame},
                          {"prompt", prompt},
                          {"options", {{{"key", "A"}, {"label", a}},
                                       {{"key", "B"}, {"label", b}}}},
                          {"required", true}};
  };
  nlohmann::json risk = nlohmann::json::array();
  risk.push_back(item(1, "You entered a lottery. Pick one.",
                      "Receive $90 for certain",
                      "95% chance of $100, otherwise nothing", "gain"));
  risk.push_back(item(2, "You entered a prize draw. Pick one.",
                      "Receive $5 for certain",
                      "5% chance of $100, otherwise nothing", "gain"));
  risk.push_back(item(3, "A game charges an entry fee. Pick one.",
                      "Pay $90 for certain",
                      "95% chance of paying $100, otherwise nothing",
                      "loss"));
  risk.push_back(item(4, "You may owe a fine. Pick one.",
                      "Pay $5 for certain",
                      "5% chance of paying $100, otherwise nothing", "loss"));
  return {
      {"risk_items", risk},
      {"submit_field", "risk_answers"},
      {"optional_items",
       {{{"id", "sensitive_data_types"}, {"kind", "multi_select"}},
        {{"id", "reads_privacy_policies"}, {"kind", "single_select"}},
        {{"id", "permission_familiarity"}, {"kind", "single_select"}},
        {{"id", "leak_response"}, {"kind", "multi_select"}},
        {{"id", "app_preference"}, {"kind", "single_select"}},
        {{"id", "comments"}, {"kind", "free_text"}}}},
      {"responses_field", "responses"}};
}

RatingService::RatingService(Store& store,
                             std::shared_ptr<const Deployment> deployment,
                             ServiceOptions options)
    : store_(store),
      options_(std::move(options)),
      deployment_(std::move(deployment)),
      rng_(std::random_device{}()) {}

void RatingService::set_deployment(
    std::shared_ptr<const Deployment> deployment) {
  std::lock_guard lock(deployment_mu_);
  deployment_ = std::move(deployment);
}

std::shared_ptr<const Deployment> RatingService::deployment() const {
  std::lock_guard lock(deployment_mu_);
  return deployment_;
}

std::int64_t RatingService::Now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string RatingService::NewId(std::string_view prefix) {
  std::lock_guard lock(rng_mu_);
  static constexpr char kHex[] = "0123456789abcdef";
  std::uint64_t v = rng_();
  std::string out(prefix);
  for (int i = 0; i < 16; ++i) {
    out.push_back(kHex[v & 0xf]);
    v >>= 4;
  }
  return out;
}

HttpResponse RatingService::Handle(const HttpRequest& request) {
  const auto parts = SplitPath(request.path);
  if (parts.empty() || parts[0] != "v1") {
    return Problem(404, "NotFound", "no route for " + request.path);
  }
  const std::size_t n = parts.size();
  auto is = [&](std::size_t i, std::string_view s) {
    return i < n && parts[i] == s;
  };
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  try {
    if (n == 2 && is(1, "health") && get) {
      return Json(200, {{"status", "ok"}, {"ready", deployment() != nullptr}});
    }
    if (n == 2 && is(1, "glossary") && get) {
      return Json(200, GlossaryToJson(options_.glossary));
    }
    if (n == 2 && is(1, "survey") && get) return Json(200, SurveySchema());
    if (n == 2 && is(1, "categories") && get) return GetCategories();
    if (n == 3 && is(1, "apps") && get) return GetApp(parts[2]);
    if (n == 4 && is(1, "apps") && is(3, "score") && get) {
      return GetAppScore(parts[2], request);
    }
    if (n == 2 && is(1, "sessions") && post) return CreateSession(request);
    if (n == 3 && is(1, "sessions") && get) return GetSession(parts[2]);
    if (n == 4 && is(1, "sessions") && post) {
      if (is(3, "ratings")) return PostRatings(parts[2], request);
      if (is(3, "survey")) return PostSurvey(parts[2], request);
      if (is(3, "attention")) return PostAttention(parts[2], request);
    }
    if (n == 3 && is(1, "reports") && get) {
      if (is(2, "comparison")) return GetComparison(request);
      if (is(2, "distributions")) return GetDistributions(request);
    }
    if (n == 3 && is(1, "exports") && get) return Export(parts[2], request);
  } catch (const nlohmann::json::exception& e) {
    return Problem(400, "BadRequest", e.what());
  } catch (const Error& e) {
    return Problem(StatusFor(e.code()), ProblemName(e.code()), e.what());
  } catch (const std::exception& e) {
    return Problem(500, "Internal", e.what());
  }
  if (!get && !post) {
    return Problem(405, "MethodNotAllowed", request.method);
  }
  return Problem(404, "NotFound",
                 "no route for " + request.method + " " + request.path);
}

HttpResponse RatingService::GetCategories() {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : d->categories()) {
    nlohmann::json apps = nlohmann::json::array();
    for (const auto& id : c.app_ids) {
      const AppRecord* app = d->FindApp(id);
      apps.push_back({{"app_id", app->app_id},
                      {"title", app->title},
                      {"package_name", app->package_name},
                      {"install_count", app->install_count},
                      {"question_count", d->ServedBehaviors(id).size()}});
    }
    out.push_back({{"category_id", c.category_id},
                   {"name", c.name},
                   {"description", c.description},
                   {"market_category", c.market_category},
                   {"keywords", c.keywords},
                   {"apps", apps}});
  }
  return Json(200, {{"categories", out}});
}

HttpResponse RatingService::GetApp(const std::string& app_id) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  const AppRecord* app = d->FindApp(app_id);
  if (app == nullptr) return Problem(404, "UnknownApp", "no app " + app_id);
  nlohmann::json questions = nlohmann::json::array();
  for (const auto* b : d->ServedBehaviors(app_id)) {
    questions.push_back(QuestionJson(*b));
  }
  const DeploymentCategory* cat = d->CategoryOfApp(app_id);
  return Json(200, {{"app_id", app->app_id},
                    {"title", app->title},
                    {"package_name", app->package_name},
                    {"description", app->description},
                    {"screenshot_uris", app->screenshot_uris},
                    {"install_count", app->install_count},
                    {"market_category", app->market_category},
                    {"category_id", cat ? nlohmann::json(cat->category_id)
                                        : nlohmann::json()},
                    {"questions", questions}});
}

HttpResponse RatingService::GetAppScore(const std::string& app_id,
                                        const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  if (d->FindApp(app_id) == nullptr) {
    return Problem(404, "UnknownApp", "no app " + app_id);
  }
  const auto calibrated = QueryBool(request, "calibrated");
  if (!calibrated) {
    return Problem(400, "BadRequest", "calibrated must be true or false");
  }
  if (*calibrated && !options_.calibration) {
    return Problem(409, "CalibrationUnconfigured",
                   "no calibration parameters configured");
  }
  const auto calibration =
      *calibrated ? options_.calibration : std::optional<CalibrationParams>();
  const RatingDataset dataset = CollectDataset(*store_.state());
  AppScore score;
  try {
    score = ScoreOneApp(dataset, d->BehaviorIndex(), app_id, calibration);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound) {
      return Problem(404, "NoRatings", e.what());
    }
    throw;
  }
  nlohmann::json out = score;
  out["calibrated"] = *calibrated;
  if (calibration) out["calibration"] = *calibration;
  return Json(200, out);
}

bool RatingService::QuestionsDone(const SessionState& session,
                                  const Deployment& deployment) const {
  for (const auto& q : deployment.QuestionSequence()) {
    if (!session.ratings.contains(q.behavior_id)) return false;
  }
  return true;
}

nlohmann::json RatingService::SessionView(const SessionState& session,
                                          const Deployment& deployment) const {
  const auto questions = deployment.QuestionSequence();
  const auto checkpoints =
      AttentionCheckpoints(deployment, options_.attention);
  std::map<std::string, const AttentionCheckpoint*> checkpoint_of;
  for (const auto& c : checkpoints) checkpoint_of[c.category_id] = &c;
  std::vector<std::string> names;
  for (const auto& c : deployment.categories()) names.push_back(c.name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  nlohmann::json items = nlohmann::json::array();
  std::optional<std::size_t> cursor;
  std::size_t answered = 0;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const Question& q = questions[i];
    const DataAccessBehavior* b = deployment.FindBehavior(q.behavior_id);
    nlohmann::json item = QuestionJson(*b);
    item["kind"] = "question";
    item["category_id"] = q.category_id;
    auto r = session.ratings.find(q.behavior_id);
    item["answered"] = r != session.ratings.end();
    if (r != session.ratings.end()) {
      item["score"] = r->second.score;
      ++answered;
    } else if (!cursor) {
      cursor = items.size();
    }
    items.push_back(std::move(item));

    const bool last_of_category = i + 1 == questions.size() ||
                                  questions[i + 1].category_id != q.category_id;
    auto cp = checkpoint_of.find(q.category_id);
    if (last_of_category && cp != checkpoint_of.end()) {
      const bool done = session.attention.contains(cp->second->checkpoint_id);
      if (!done && !cursor) cursor = items.size();
      items.push_back({{"kind", "attention"},
                       {"checkpoint_id", cp->second->checkpoint_id},
                       {"category_id", q.category_id},
                       {"prompt", "Which app category are you rating now?"},
                       {"options", names},
                       {"answered", done}});
    }
  }
  const bool questions_done = answered == questions.size();
  return {{"session_id", session.session_id},
          {"rater_id", session.rater_id},
          {"status", SessionStatusName(session.status)},
          {"progress",
           {{"answered", answered},
            {"total", questions.size()},
            {"cursor", cursor.value_or(items.size())}}},
          {"survey",
           {{"unlocked", questions_done},
            {"submitted", session.profile.has_value()}}},
          {"items", items}};
}

HttpResponse RatingService::CreateSession(const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  nlohmann::json body = request.body.empty()
                            ? nlohmann::json::object()
                            : nlohmann::json::parse(request.body);
  std::string rater_id = body.value("rater_id", std::string());
  if (rater_id.empty()) rater_id = NewId("r-");
  const std::string new_session = NewId("s-");
  bool resumed = false;
  auto state = store_.Commit(
      [&](const StoreState& s) -> std::optional<nlohmann::json> {
        if (s.session_of_rater.contains(rater_id)) {
          resumed = true;
          return std::nullopt;
        }
        return SessionCreatedEvent(new_session, rater_id, Now());
      });
  const std::string& sid = state->session_of_rater.at(rater_id);
  return Json(resumed ? 200 : 201,
              SessionView(*state->FindSession(sid), *d));
}

HttpResponse RatingService::GetSession(const std::string& session_id) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  auto state = store_.state();
  const SessionState* s = state->FindSession(session_id);
  if (s == nullptr) {
    return Problem(404, "UnknownSession", "no session " + session_id);
  }
  return Json(200, SessionView(*s, *d));
}

HttpResponse RatingService::PostRatings(const std::string& session_id,
                                        const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  const nlohmann::json body = nlohmann::json::parse(request.body);
  if (!body.contains("ratings") || !body.at("ratings").is_array()) {
    return Problem(400, "BadRequest", "body needs a ratings array");
  }

  nlohmann::json rejected = nlohmann::json::array();
  std::size_t accepted = 0;
  std::size_t replaced = 0;
  bool flagged = false;
  bool unknown_session = false;
  auto state = store_.Commit(
      [&](const StoreState& s) -> std::optional<nlohmann::json> {
        const SessionState* session = s.FindSession(session_id);
        if (session == nullptr) {
          unknown_session = true;
          return std::nullopt;
        }
        flagged = session->status == SessionStatus::kFlagged;
        RatingLookup lookup;
        lookup.behavior_exists = [&](std::string_view id) {
          const DataAccessBehavior* b = d->FindBehavior(id);
          return b != nullptr && b->explanation.verified;
        };
        lookup.rater_exists = [&](std::string_view id) {
          return id == session->rater_id;
        };
        const std::int64_t now = Now();
        std::map<std::string, Rating> batch;  // last one wins within a batch
        const auto& items = body.at("ratings");
        for (std::size_t i = 0; i < items.size(); ++i) {
          const auto& item = items[i];
          try {
            if (!item.is_object()) {
              throw Error(ErrorCode::kMalformedRecord,
                          "rating item must be an object");
            }
            RatingSubmission sub;
            sub.rater_id = item.value("rater_id", session->rater_id);
            sub.behavior_id = item.at("behavior_id").get<std::string>();
            sub.score = item.contains("score") ? item.at("score")
                                               : nlohmann::json();
            sub.submitted_at = now;
            Rating r = ValidateRating(sub, lookup);
            batch.insert_or_assign(r.behavior_id, std::move(r));
          } catch (const Error& e) {
            rejected.push_back({{"index", i},
                                {"behavior_id", item.value("behavior_id", "")},
                                {"error", ProblemName(e.code())},
                                {"message", e.what()}});
          } catch (const nlohmann::json::exception& e) {
            rejected.push_back({{"index", i},
                                {"error", "MalformedRecord"},
                                {"message", e.what()}});
          }
        }
        if (batch.empty()) return std::nullopt;
        std::vector<Rating> ratings;
        for (auto& [id, r] : batch) {
          if (session->ratings.contains(id)) ++replaced;
          ratings.push_back(std::move(r));
        }
        accepted = ratings.size();
        SessionState after = *session;
        for (const auto& r : ratings) after.ratings.insert_or_assign(
            r.behavior_id, r);
        const bool complete = QuestionsDone(after, *d) && after.profile;
        return RatingsBatchEvent(session_id, ratings, complete);
      });
  if (unknown_session) {
    return Problem(404, "UnknownSession", "no session " + session_id);
  }
  nlohmann::json out = {{"accepted", accepted},
                        {"replaced", replaced},
                        {"rejected", rejected},
                        {"session", SessionView(*state->FindSession(session_id),
                                                *d)}};
  out["session"].erase("items");
  if (flagged) {
    out["excluded"] = true;
    out["error"] = "SessionFlagged";
    out["message"] =
        "session failed an attention check; ratings are stored but excluded";
    return Json(409, out);
  }
  if (!rejected.empty()) {
    out["error"] = "ValidationFailed";
    out["message"] = std::to_string(rejected.size()) + " item(s) rejected";
    return Json(422, out);
  }
  return Json(200, out);
}

HttpResponse RatingService::PostSurvey(const std::string& session_id,
                                       const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  const nlohmann::json body = nlohmann::json::parse(request.body);
  std::vector<RiskAnswer> answers;
  try {
    answers = ParseAnswers(body.at("risk_answers"));
  } catch (const std::exception& e) {
    return Problem(422, "IncompleteSurvey",
                   "risk_answers must list four A/B choices");
  }

  std::optional<HttpResponse> refusal;
  auto state = store_.Commit(
      [&](const StoreState& s) -> std::optional<nlohmann::json> {
        const SessionState* session = s.FindSession(session_id);
        if (session == nullptr) {
          refusal = Problem(404, "UnknownSession", "no session " + session_id);
          return std::nullopt;
        }
        if (!QuestionsDone(*session, *d)) {
          refusal = Problem(409, "SurveyLocked",
                            "the survey opens after every question is rated");
          return std::nullopt;
        }
        RaterProfile profile;
        profile.rater_id = session->rater_id;
        profile.risk_answers = answers;
        profile.risk_class = ClassifyRisk(answers);
        profile.attention_pass = session->status != SessionStatus::kFlagged;
        return SurveySubmittedEvent(session_id, profile,
                                    body.value("responses", nlohmann::json()),
                                    Now(), /*complete=*/true);
      });
  if (refusal) return *refusal;
  const SessionState* s = state->FindSession(session_id);
  nlohmann::json out = SessionView(*s, *d);
  out.erase("items");
  out["risk_class"] = s->profile->risk_class;
  return Json(200, out);
}

HttpResponse RatingService::PostAttention(const std::string& session_id,
                                          const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  const nlohmann::json body = nlohmann::json::parse(request.body);
  const std::string checkpoint_id = body.at("checkpoint_id").get<std::string>();
  const std::string answer = body.at("answer").get<std::string>();
  const AttentionCheckpoint* checkpoint = nullptr;
  const auto checkpoints = AttentionCheckpoints(*d, options_.attention);
  for (const auto& c : checkpoints) {
    if (c.checkpoint_id == checkpoint_id) checkpoint = &c;
  }
  if (checkpoint == nullptr) {
    return Problem(404, "UnknownCheckpoint", "no checkpoint " + checkpoint_id);
  }
  const bool passed =
      Lower(Trim(answer)) == Lower(Trim(checkpoint->expected_answer));

  std::optional<HttpResponse> refusal;
  auto state = store_.Commit(
      [&](const StoreState& s) -> std::optional<nlohmann::json> {
        const SessionState* session = s.FindSession(session_id);
        if (session == nullptr) {
          refusal = Problem(404, "UnknownSession", "no session " + session_id);
          return std::nullopt;
        }
        if (session->attention.contains(checkpoint_id)) {
          refusal = Problem(409, "AlreadyAnswered",
                            "checkpoint " + checkpoint_id + " was answered");
          return std::nullopt;
        }
        return AttentionAnsweredEvent(session_id, checkpoint_id, answer,
                                      passed, Now());
      });
  if (refusal) return *refusal;
  const SessionState* s = state->FindSession(session_id);
  return Json(200, {{"checkpoint_id", checkpoint_id},
                    {"passed", passed},
                    {"status", SessionStatusName(s->status)}});
}

HttpResponse RatingService::GetComparison(const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  if (options_.experts.empty()) {
    return Problem(409, "ExpertsUnconfigured", "no expert ratings configured");
  }
  const auto calibrated = QueryBool(request, "calibrated");
  if (!calibrated) {
    return Problem(400, "BadRequest", "calibrated must be true or false");
  }
  if (*calibrated && !options_.calibration) {
    return Problem(409, "CalibrationUnconfigured",
                   "no calibration parameters configured");
  }
  const auto experts = LoadExpertRatings(options_.experts);
  const auto report = ComparisonForDataset(
      CollectDataset(*store_.state()), experts, d->BehaviorIndex(),
      *calibrated ? options_.calibration : std::nullopt);
  if (QueryFormat(request) == "csv") {
    return Text(200, "text/csv", ComparisonToCsv(report));
  }
  return Json(200, report);
}

HttpResponse RatingService::GetDistributions(const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  const auto calibrated = QueryBool(request, "calibrated");
  if (!calibrated) {
    return Problem(400, "BadRequest", "calibrated must be true or false");
  }
  if (*calibrated && !options_.calibration) {
    return Problem(409, "CalibrationUnconfigured",
                   "no calibration parameters configured");
  }
  return Json(200, DistributionsReport(
                       CollectDataset(*store_.state()), d->BehaviorIndex(),
                       *calibrated ? options_.calibration : std::nullopt));
}

HttpResponse RatingService::Export(const std::string& what,
                                   const HttpRequest& request) {
  auto d = deployment();
  if (!d) return Problem(503, "NotReady", "no deployment loaded");
  const std::string format = QueryFormat(request);
  if (format != "json" && format != "csv") {
    return Problem(400, "BadRequest", "format must be json or csv");
  }
  const bool csv = format == "csv";
  const RatingDataset dataset = CollectDataset(*store_.state());
  if (what == "ratings") {
    if (csv) return Text(200, "text/csv", RatingsToCsv(dataset.ratings));
    return Json(200, {{"ratings", dataset.ratings},
                      {"excluded_sessions", dataset.excluded_sessions}});
  }
  if (what == "scores" || what == "calibrated") {
    auto calibrated = QueryBool(request, "calibrated");
    if (!calibrated) {
      return Problem(400, "BadRequest", "calibrated must be true or false");
    }
    if (what == "calibrated") calibrated = true;
    if (*calibrated && !options_.calibration) {
      return Problem(409, "CalibrationUnconfigured",
                     "no calibration parameters configured");
    }
    if (what == "calibrated") {
      const auto out = CalibrateDataset(dataset.ratings, dataset.profiles,
                                        *options_.calibration);
      if (csv) return Text(200, "text/csv", CalibratedToCsv(out));
      return Json(200, out);
    }
    const auto scores =
        ScoreAllApps(dataset, d->BehaviorIndex(),
                     *calibrated ? options_.calibration : std::nullopt);
    if (csv) return Text(200, "text/csv", ScoresToCsv(scores));
    return Json(200, ScoresToJson(scores));
  }
  if (what == "profiles") {
    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& [id, p] : dataset.profiles) profiles.push_back(p);
    return Json(200, {{"profiles", profiles}});
  }
  return Problem(404, "NotFound", "no export named " + what);
}

}  // namespace depra
