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

#ifndef DEPRA_STORE_H_
#define DEPRA_STORE_H_

// Rating-session state rebuilt by replaying the event log. Readers take an
// immutable snapshot of the state; every write goes through one committer
// that appends the event durably before publishing the new state.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "depra/event_log.h"
#include "depra/model.h"

namespace depra {

// Event "type" values.
inline constexpr std::string_view kEventSessionCreated = "session_created";
inline constexpr std::string_view kEventRatingsBatch = "ratings_batch";
inline constexpr std::string_view kEventSurveySubmitted = "survey_submitted";
inline constexpr std::string_view kEventAttentionAnswered =
    "attention_answered";

enum class SessionStatus { kActive, kCompleted, kFlagged };
std::string_view SessionStatusName(SessionStatus status);

struct AttentionAnswer {
  std::string answer;
  bool passed = false;
  std::int64_t at = 0;

  friend bool operator==(const AttentionAnswer&,
                         const AttentionAnswer&) = default;
};

struct SessionState {
  std::string session_id;
  std::string rater_id;
  std::int64_t created_at = 0;
  SessionStatus status = SessionStatus::kActive;
  std::map<std::string, Rating, std::less<>> ratings;  // by behavior_id
  std::map<std::string, AttentionAnswer, std::less<>> attention;
  std::optional<RaterProfile> profile;
  nlohmann::json survey_responses;  // free-form answers kept verbatim

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

struct StoreState {
  std::map<std::string, std::shared_ptr<const SessionState>, std::less<>>
      sessions;
  std::map<std::string, std::string, std::less<>> session_of_rater;
  std::uint64_t event_count = 0;

  const SessionState* FindSession(std::string_view session_id) const;
};

// Applies one event. A Flagged session never changes status again; an
// event carrying "complete": true moves an Active session to Completed.
// Throws kCorruptLog for events that do not fit the current state.
void ApplyEvent(StoreState& state, const nlohmann::json& event);

nlohmann::json StateToJson(const StoreState& state);
StoreState StateFromJson(const nlohmann::json& j);

// Event builders shared by the service and the generator.
nlohmann::json SessionCreatedEvent(std::string_view session_id,
                                   std::string_view rater_id,
                                   std::int64_t at);
nlohmann::json RatingsBatchEvent(std::string_view session_id,
                                 std::span<const Rating> ratings,
                                 bool complete = false);
nlohmann::json SurveySubmittedEvent(std::string_view session_id,
                                    const RaterProfile& profile,
                                    const nlohmann::json& responses,
                                    std::int64_t at, bool complete = false);
nlohmann::json AttentionAnsweredEvent(std::string_view session_id,
                                      std::string_view checkpoint_id,
                                      std::string_view answer, bool passed,
                                      std::int64_t at);

class Store {
 public:
  struct Options {
    std::filesystem::path event_log;
    std::filesystem::path snapshot;  // empty disables snapshots
    std::size_t snapshot_every = 500;
  };

  // Restores from the snapshot, if usable, then replays the rest of the
  // log, cutting off any interrupted trailing append.
  explicit Store(Options options);

  std::shared_ptr<const StoreState> state() const;

  // Runs `build` against the current state under the commit lock. When it
  // returns an event, the event is appended durably, applied and published;
  // the new state is returned. A nullopt from `build` commits nothing.
  using EventBuilder =
      std::function<std::optional<nlohmann::json>(const StoreState&)>;
  std::shared_ptr<const StoreState> Commit(const EventBuilder& build);

  // Writes a snapshot now (no-op when snapshots are disabled).
  void Checkpoint();

  std::uint64_t discarded_bytes_at_open() const { return discarded_; }

 private:
  void Publish(std::shared_ptr<const StoreState> next);
  void CheckpointLocked(const StoreState& state);

  Options options_;
  std::unique_ptr<EventLog> log_;
  std::uint64_t discarded_ = 0;
  std::size_t since_snapshot_ = 0;

  std::mutex commit_mu_;
  mutable std::mutex publish_mu_;
  std::shared_ptr<const StoreState> current_;
};

// Replays a log file offline without modifying it.
StoreState ReplayLogFile(const std::filesystem::path& event_log);

}  // namespace depra

#endif  // DEPRA_STORE_H_
