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

#include "depra/store.h"

#include "depra/error.h"

namespace depra {
namespace {

[[noreturn]] void Corrupt(const std::string& message) {
  throw Error(ErrorCode::kCorruptLog, message);
}

SessionStatus ParseStatus(std::string_view name) {
  if (name == "active") return SessionStatus::kActive;
  if (name == "completed") return SessionStatus::kCompleted;
  if (name == "flagged") return SessionStatus::kFlagged;
  Corrupt("unknown session status " + std::string(name));
}

void MarkComplete(SessionState& s, const nlohmann::json& event) {
  if (event.value("complete", false) && s.status == SessionStatus::kActive) {
    s.status = SessionStatus::kCompleted;
  }
}

}  // namespace

std::string_view SessionStatusName(SessionStatus status) {
  switch (status) {
    case SessionStatus::kActive:
      return "active";
    case SessionStatus::kCompleted:
      return "completed";
    case SessionStatus::kFlagged:
      return "flagged";
  }
  return "active";
}

const SessionState* StoreState::FindSession(std::string_view session_id) const {
  auto it = sessions.find(session_id);
  return it == sessions.end() ? nullptr : it->second.get();
}

void ApplyEvent(StoreState& state, const nlohmann::json& event) {
  if (!event.is_object() || !event.contains("type") ||
      !event.contains("session_id")) {
    Corrupt("event without type or session_id: " + event.dump());
  }
  try {
    const std::string type = event.at("type").get<std::string>();
    const std::string session_id = event.at("session_id").get<std::string>();

    if (type == kEventSessionCreated) {
      const std::string rater_id = event.at("rater_id").get<std::string>();
      if (state.sessions.contains(session_id)) {
        Corrupt("session " + session_id + " created twice");
      }
      if (state.session_of_rater.contains(rater_id)) {
        Corrupt("rater " + rater_id + " already has a session");
      }
      auto s = std::make_shared<SessionState>();
      s->session_id = session_id;
      s->rater_id = rater_id;
      s->created_at = event.value("at", std::int64_t{0});
      state.sessions.emplace(session_id, std::move(s));
      state.session_of_rater.emplace(rater_id, session_id);
      ++state.event_count;
      return;
    }

    auto it = state.sessions.find(session_id);
    if (it == state.sessions.end()) {
      Corrupt(type + " for unknown session " + session_id);
    }
    auto next = std::make_shared<SessionState>(*it->second);

    if (type == kEventRatingsBatch) {
      for (const auto& item : event.at("ratings")) {
        Rating r = item.get<Rating>();
        if (r.rater_id != next->rater_id) {
          Corrupt("rating by " + r.rater_id + " in session of " +
                  next->rater_id);
        }
        if (r.score < kMinScore || r.score > kMaxScore) {
          Corrupt("stored score out of range for " + r.behavior_id);
        }
        next->ratings.insert_or_assign(r.behavior_id, std::move(r));
      }
      MarkComplete(*next, event);
    } else if (type == kEventSurveySubmitted) {
      RaterProfile profile = event.at("profile").get<RaterProfile>();
      if (profile.rater_id != next->rater_id) {
        Corrupt("survey profile for " + profile.rater_id + " in session of " +
                next->rater_id);
      }
      next->profile = std::move(profile);
      next->survey_responses = event.value("responses", nlohmann::json());
      MarkComplete(*next, event);
    } else if (type == kEventAttentionAnswered) {
      AttentionAnswer a;
      a.answer = event.at("answer").get<std::string>();
      a.passed = event.at("passed").get<bool>();
      a.at = event.value("at", std::int64_t{0});
      next->attention.insert_or_assign(
          event.at("checkpoint_id").get<std::string>(), a);
      if (!a.passed) next->status = SessionStatus::kFlagged;
    } else {
      Corrupt("unknown event type " + type);
    }
    it->second = std::move(next);
    ++state.event_count;
  } catch (const nlohmann::json::exception& e) {
    Corrupt(std::string("malformed event: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptLog) throw;
    Corrupt(std::string("malformed event: ") + e.what());
  }
}

nlohmann::json StateToJson(const StoreState& state) {
  nlohmann::json sessions = nlohmann::json::array();
  for (const auto& [id, s] : state.sessions) {
    nlohmann::json ratings = nlohmann::json::array();
    for (const auto& [bid, r] : s->ratings) ratings.push_back(r);
    nlohmann::json attention = nlohmann::json::object();
    for (const auto& [cid, a] : s->attention) {
      attention[cid] = {{"answer", a.answer}, {"passed", a.passed},
                        {"at", a.at}};
    }
    nlohmann::json js = {{"session_id", s->session_id},
                         {"rater_id", s->rater_id},
                         {"created_at", s->created_at},
                         {"status", SessionStatusName(s->status)},
                         {"ratings", ratings},
                         {"attention", attention},
                         {"survey_responses", s->survey_responses}};
    js["profile"] = s->profile ? nlohmann::json(*s->profile) : nlohmann::json();
    sessions.push_back(std::move(js));
  }
  return {{"event_count", state.event_count}, {"sessions", sessions}};
}

StoreState StateFromJson(const nlohmann::json& j) {
  StoreState state;
  try {
    state.event_count = j.at("event_count").get<std::uint64_t>();
    for (const auto& js : j.at("sessions")) {
      auto s = std::make_shared<SessionState>();
      s->session_id = js.at("session_id").get<std::string>();
      s->rater_id = js.at("rater_id").get<std::string>();
      s->created_at = js.at("created_at").get<std::int64_t>();
      s->status = ParseStatus(js.at("status").get<std::string>());
      for (const auto& r : js.at("ratings")) {
        Rating rating = r.get<Rating>();
        s->ratings.emplace(rating.behavior_id, std::move(rating));
      }
      for (const auto& [cid, a] : js.at("attention").items()) {
        s->attention.emplace(cid, AttentionAnswer{a.at("answer"),
                                                  a.at("passed"), a.at("at")});
      }
      if (!js.at("profile").is_null()) {
        s->profile = js.at("profile").get<RaterProfile>();
      }
      s->survey_responses = js.value("survey_responses", nlohmann::json());
      state.session_of_rater.emplace(s->rater_id, s->session_id);
      state.sessions.emplace(s->session_id, std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    Corrupt(std::string("malformed snapshot: ") + e.what());
  }
  return state;
}

nlohmann::json SessionCreatedEvent(std::string_view session_id,
                                   std::string_view rater_id,
                                   std::int64_t at) {
  return {{"type", kEventSessionCreated},
          {"session_id", session_id},
          {"rater_id", rater_id},
          {"at", at}};
}

nlohmann::json RatingsBatchEvent(std::string_view session_id,
                                 std::span<const Rating> ratings,
                                 bool complete) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& r : ratings) items.push_back(r);
  nlohmann::json e = {{"type", kEventRatingsBatch},
                      {"session_id", session_id},
                      {"ratings", items}};
  if (complete) e["complete"] = true;
  return e;
}

nlohmann::json SurveySubmittedEvent(std::string_view session_id,
                                    const RaterProfile& profile,
                                    const nlohmann::json& responses,
                                    std::int64_t at, bool complete) {
  nlohmann::json e = {{"type", kEventSurveySubmitted},
                      {"session_id", session_id},
                      {"profile", profile},
                      {"responses", responses},
                      {"at", at}};
  if (complete) e["complete"] = true;
  return e;
}

nlohmann::json AttentionAnsweredEvent(std::string_view session_id,
                                      std::string_view checkpoint_id,
                                      std::string_view answer, bool passed,
                                      std::int64_t at) {
  return {{"type", kEventAttentionAnswered},
          {"session_id", session_id},
          {"checkpoint_id", checkpoint_id},
          {"answer", answer},
          {"passed", passed},
          {"at", at}};
}

Store::Store(Options options) : options_(std::move(options)) {
  auto state = std::make_shared<StoreState>();
  std::uint64_t offset = 0;
  if (!options_.snapshot.empty()) {
    if (auto snap = ReadSnapshot(options_.snapshot)) {
      std::error_code ec;
      const auto size = std::filesystem::file_size(options_.event_log, ec);
      if (!ec && snap->log_offset <= size) {
        try {
          *state = StateFromJson(snap->state);
          offset = snap->log_offset;
        } catch (const Error&) {
          *state = StoreState{};
        }
      }
    }
  }
  LogRecovery rec = RecoverLog(options_.event_log, offset);
  for (const auto& e : rec.events) ApplyEvent(*state, e);
  discarded_ = rec.discarded_bytes;
  log_ = std::make_unique<EventLog>(options_.event_log);
  current_ = std::move(state);
}

std::shared_ptr<const StoreState> Store::state() const {
  std::lock_guard lock(publish_mu_);
  return current_;
}

void Store::Publish(std::shared_ptr<const StoreState> next) {
  std::lock_guard lock(publish_mu_);
  current_ = std::move(next);
}

std::shared_ptr<const StoreState> Store::Commit(const EventBuilder& build) {
  std::lock_guard lock(commit_mu_);
  auto base = state();
  std::optional<nlohmann::json> event = build(*base);
  if (!event) return base;
  // Validate against a copy before anything reaches the log.
  auto next = std::make_shared<StoreState>(*base);
  ApplyEvent(*next, *event);
  log_->Append(*event);
  Publish(next);
  if (!options_.snapshot.empty() && options_.snapshot_every > 0 &&
      ++since_snapshot_ >= options_.snapshot_every) {
    CheckpointLocked(*next);
  }
  return next;
}

void Store::Checkpoint() {
  std::lock_guard lock(commit_mu_);
  if (!options_.snapshot.empty()) CheckpointLocked(*state());
}

void Store::CheckpointLocked(const StoreState& state) {
  WriteSnapshot(options_.snapshot, {log_->size(), StateToJson(state)});
  since_snapshot_ = 0;
}

StoreState ReplayLogFile(const std::filesystem::path& event_log) {
  if (!std::filesystem::exists(event_log)) {
    throw Error(ErrorCode::kMissingPrerequisite,
                "event log not found: " + event_log.string());
  }
  StoreState state;
  for (const auto& e : RecoverLog(event_log, 0, false).events) {
    ApplyEvent(state, e);
  }
  return state;
}

}  // namespace depra
