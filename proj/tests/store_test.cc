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

#include <gtest/gtest.h>

#include "depra/event_log.h"
#include "depra/scoring.h"
#include "test_util.h"

namespace depra {
namespace {

using testing::CodeOf;
using testing::TempDir;

std::vector<Rating> Batch(const std::string& rater, int first, int count,
                          int score) {
  std::vector<Rating> out;
  for (int i = first; i < first + count; ++i) {
    out.push_back({rater, "b" + std::to_string(i), score, 1000 + i});
  }
  return out;
}

RaterProfile Profile(const std::string& rater) {
  return {rater,
          {RiskAnswer::kA, RiskAnswer::kA, RiskAnswer::kA, RiskAnswer::kA},
          RiskClass::kAverse,
          true};
}

std::vector<nlohmann::json> SampleEvents() {
  return {SessionCreatedEvent("s1", "u1", 1),
          RatingsBatchEvent("s1", Batch("u1", 0, 3, -1)),
          SessionCreatedEvent("s2", "u2", 2),
          RatingsBatchEvent("s2", Batch("u2", 0, 2, 2)),
          RatingsBatchEvent("s1", Batch("u1", 3, 2, 1)),
          SurveySubmittedEvent("s1", Profile("u1"), {{"age", "25-34"}}, 5,
                               true),
          AttentionAnsweredEvent("s2", "attn-c1", "wrong", false, 6)};
}

StoreState ApplyAll(const std::vector<nlohmann::json>& events) {
  StoreState s;
  for (const auto& e : events) ApplyEvent(s, e);
  return s;
}

TEST(ApplyEvent, BuildsSessions) {
  auto s = ApplyAll(SampleEvents());
  EXPECT_EQ(s.event_count, 7u);
  const auto* s1 = s.FindSession("s1");
  ASSERT_NE(s1, nullptr);
  EXPECT_EQ(s1->ratings.size(), 5u);
  EXPECT_EQ(s1->status, SessionStatus::kCompleted);
  ASSERT_TRUE(s1->profile.has_value());
  EXPECT_EQ(s1->profile->risk_class, RiskClass::kAverse);
  EXPECT_EQ(s1->survey_responses["age"], "25-34");
  const auto* s2 = s.FindSession("s2");
  EXPECT_EQ(s2->status, SessionStatus::kFlagged);
  EXPECT_FALSE(s2->attention.at("attn-c1").passed);
  EXPECT_EQ(s.session_of_rater.at("u2"), "s2");
}

TEST(ApplyEvent, ResubmissionReplaces) {
  auto s = ApplyAll({SessionCreatedEvent("s1", "u1", 1),
                     RatingsBatchEvent("s1", Batch("u1", 0, 1, -2)),
                     RatingsBatchEvent("s1", Batch("u1", 0, 1, 2))});
  const auto* s1 = s.FindSession("s1");
  ASSERT_EQ(s1->ratings.size(), 1u);
  EXPECT_EQ(s1->ratings.at("b0").score, 2);
}

TEST(ApplyEvent, FlaggedIsPermanent) {
  auto s = ApplyAll({SessionCreatedEvent("s1", "u1", 1),
                     AttentionAnsweredEvent("s1", "attn-a", "x", false, 2),
                     RatingsBatchEvent("s1", Batch("u1", 0, 1, 1), true),
                     AttentionAnsweredEvent("s1", "attn-b", "y", true, 3)});
  EXPECT_EQ(s.FindSession("s1")->status, SessionStatus::kFlagged);
}

TEST(ApplyEvent, BadEventsAreCorrupt) {
  StoreState s;
  EXPECT_EQ(CodeOf([&] { ApplyEvent(s, {{"type", "bogus"}}); }),
            ErrorCode::kCorruptLog);
  EXPECT_EQ(CodeOf([&] {
              ApplyEvent(s, RatingsBatchEvent("nope", Batch("u", 0, 1, 0)));
            }),
            ErrorCode::kCorruptLog);
  ApplyEvent(s, SessionCreatedEvent("s1", "u1", 1));
  EXPECT_EQ(CodeOf([&] { ApplyEvent(s, SessionCreatedEvent("s1", "u1", 1)); }),
            ErrorCode::kCorruptLog);
  EXPECT_EQ(CodeOf([&] {
              ApplyEvent(s, RatingsBatchEvent("s1", Batch("u1", 0, 1, 3)));
            }),
            ErrorCode::kCorruptLog);
}

TEST(StateJson, RoundTrip) {
  auto s = ApplyAll(SampleEvents());
  auto back = StateFromJson(StateToJson(s));
  EXPECT_EQ(StateToJson(back), StateToJson(s));
  EXPECT_EQ(back.event_count, s.event_count);
  EXPECT_EQ(*back.FindSession("s1"), *s.FindSession("s1"));
}

std::string LogText(const std::vector<nlohmann::json>& events) {
  std::string text;
  for (const auto& e : events) text += e.dump() + "\n";
  return text;
}

TEST(RecoverLog, TruncationAtEveryByte) {
  const auto events = SampleEvents();
  const std::string full = LogText(events);
  std::vector<std::size_t> boundaries = {0};
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (full[i] == '\n') boundaries.push_back(i + 1);
  }
  TempDir dir;
  const auto path = dir / "events.jsonl";
  for (std::size_t cut = 0; cut <= full.size(); ++cut) {
    testing::WriteFile(path, full.substr(0, cut));
    auto rec = RecoverLog(path);
    std::size_t complete = 0;
    while (complete + 1 < boundaries.size() && boundaries[complete + 1] <= cut) {
      ++complete;
    }
    ASSERT_EQ(rec.events.size(), complete) << "cut " << cut;
    EXPECT_EQ(rec.valid_bytes, boundaries[complete]);
    EXPECT_EQ(rec.discarded_bytes, cut - boundaries[complete]);
    EXPECT_EQ(std::filesystem::file_size(path), boundaries[complete]);
    for (std::size_t i = 0; i < complete; ++i) {
      EXPECT_EQ(rec.events[i], events[i]);
    }
    // Every prefix replays into a consistent state.
    EXPECT_NO_THROW(ApplyAll(rec.events));
  }
}

TEST(RecoverLog, CorruptMiddleLineRejected) {
  TempDir dir;
  const auto path = dir / "events.jsonl";
  auto events = SampleEvents();
  std::string text = events[0].dump() + "\n{garbage\n" + events[1].dump() + "\n";
  testing::WriteFile(path, text);
  EXPECT_EQ(CodeOf([&] { RecoverLog(path); }), ErrorCode::kCorruptLog);
  EXPECT_EQ(testing::ReadFile(path), text);
}

TEST(RecoverLog, MissingFileIsEmpty) {
  TempDir dir;
  auto rec = RecoverLog(dir / "absent.jsonl");
  EXPECT_TRUE(rec.events.empty());
  EXPECT_EQ(rec.valid_bytes, 0u);
}

TEST(RecoverLog, NoTruncateLeavesFile) {
  TempDir dir;
  const auto path = dir / "events.jsonl";
  const std::string text = LogText(SampleEvents()) + "{\"type\":";
  testing::WriteFile(path, text);
  auto rec = RecoverLog(path, 0, false);
  EXPECT_EQ(rec.events.size(), 7u);
  EXPECT_EQ(testing::ReadFile(path), text);
}

TEST(EventLog, AppendReturnsSize) {
  TempDir dir;
  EventLog log(dir / "events.jsonl");
  const auto e = SessionCreatedEvent("s1", "u1", 1);
  EXPECT_EQ(log.Append(e), e.dump().size() + 1);
  EXPECT_EQ(log.size(), e.dump().size() + 1);
  EXPECT_EQ(RecoverLog(dir / "events.jsonl").events.size(), 1u);
}

TEST(Snapshot, WriteReadAndDamage) {
  TempDir dir;
  const auto path = dir / "snap.json";
  EXPECT_FALSE(ReadSnapshot(path).has_value());
  WriteSnapshot(path, {42, {{"x", 1}}});
  auto snap = ReadSnapshot(path);
  ASSERT_TRUE(snap.has_value());
  EXPECT_EQ(snap->log_offset, 42u);
  EXPECT_EQ(snap->state["x"], 1);
  testing::WriteFile(path, "{broken");
  EXPECT_FALSE(ReadSnapshot(path).has_value());
}

Store::Options Opts(const TempDir& dir, std::size_t every = 500) {
  return {dir / "events.jsonl", dir / "snapshot.json", every};
}

std::optional<nlohmann::json> Emit(nlohmann::json e) { return e; }

TEST(Store, CommitPersistsAndReopens) {
  TempDir dir;
  {
    Store store(Opts(dir));
    for (const auto& e : SampleEvents()) {
      store.Commit([&](const StoreState&) { return Emit(e); });
    }
    EXPECT_EQ(store.state()->event_count, 7u);
  }
  Store reopened(Opts(dir));
  EXPECT_EQ(StateToJson(*reopened.state()), StateToJson(ApplyAll(SampleEvents())));
  EXPECT_EQ(StateToJson(ReplayLogFile(dir / "events.jsonl")),
            StateToJson(*reopened.state()));
}

TEST(Store, RejectedEventIsNotWritten) {
  TempDir dir;
  Store store(Opts(dir));
  store.Commit([](const StoreState&) {
    return Emit(SessionCreatedEvent("s1", "u1", 1));
  });
  const auto before = std::filesystem::file_size(dir / "events.jsonl");
  EXPECT_THROW(store.Commit([](const StoreState&) {
    return Emit(SessionCreatedEvent("s1", "u1", 1));
  }),
               Error);
  EXPECT_EQ(std::filesystem::file_size(dir / "events.jsonl"), before);
  store.Commit([](const StoreState&) { return std::nullopt; });
  EXPECT_EQ(std::filesystem::file_size(dir / "events.jsonl"), before);
  EXPECT_EQ(store.state()->event_count, 1u);
}

TEST(Store, SnapshotThenTailReplay) {
  TempDir dir;
  const auto events = SampleEvents();
  {
    Store store(Opts(dir, 3));
    for (const auto& e : events) {
      store.Commit([&](const StoreState&) { return Emit(e); });
    }
  }
  auto snap = ReadSnapshot(dir / "snapshot.json");
  ASSERT_TRUE(snap.has_value());
  EXPECT_GT(snap->log_offset, 0u);
  Store reopened(Opts(dir, 3));
  EXPECT_EQ(StateToJson(*reopened.state()), StateToJson(ApplyAll(events)));
}

TEST(Store, SnapshotBeyondLogIsIgnored) {
  TempDir dir;
  {
    Store store(Opts(dir));
    for (const auto& e : SampleEvents()) {
      store.Commit([&](const StoreState&) { return Emit(e); });
    }
    store.Checkpoint();
  }
  // Log lost its tail after the snapshot was taken.
  const std::string two = LogText({SampleEvents()[0], SampleEvents()[1]});
  testing::WriteFile(dir / "events.jsonl", two);
  Store reopened(Opts(dir));
  EXPECT_EQ(reopened.state()->event_count, 2u);
}

TEST(Store, PartialTailCutAtOpen) {
  TempDir dir;
  const std::string text = LogText(SampleEvents());
  testing::WriteFile(dir / "events.jsonl",
                     text + RatingsBatchEvent("s2", Batch("u2", 5, 4, 1))
                                .dump()
                                .substr(0, 20));
  Store store(Opts(dir));
  EXPECT_EQ(store.discarded_bytes_at_open(), 20u);
  EXPECT_EQ(store.state()->event_count, 7u);
  EXPECT_EQ(testing::ReadFile(dir / "events.jsonl"), text);
}

TEST(Store, ReplayMissingLog) {
  TempDir dir;
  EXPECT_EQ(CodeOf([&] { ReplayLogFile(dir / "nope.jsonl"); }),
            ErrorCode::kMissingPrerequisite);
}

TEST(Store, ReadersKeepTheirSnapshot) {
  TempDir dir;
  Store store(Opts(dir));
  store.Commit(
      [](const StoreState&) { return Emit(SessionCreatedEvent("s1", "u1", 1)); });
  auto view = store.state();
  store.Commit([](const StoreState&) {
    return Emit(RatingsBatchEvent("s1", Batch("u1", 0, 2, 1)));
  });
  EXPECT_TRUE(view->FindSession("s1")->ratings.empty());
  EXPECT_EQ(store.state()->FindSession("s1")->ratings.size(), 2u);
}

TEST(CollectDataset, FlaggedSessionsExcludedWhole) {
  auto s = ApplyAll(SampleEvents());
  auto data = CollectDataset(s);
  EXPECT_EQ(data.ratings.size(), 5u);
  EXPECT_EQ(data.excluded_sessions, std::vector<std::string>{"s2"});
  EXPECT_EQ(data.excluded_ratings, 2u);
  EXPECT_TRUE(data.profiles.contains("u1"));
  EXPECT_TRUE(std::is_sorted(
      data.ratings.begin(), data.ratings.end(),
      [](const Rating& a, const Rating& b) {
        return std::tie(a.rater_id, a.behavior_id) <
               std::tie(b.rater_id, b.behavior_id);
      }));
  EXPECT_EQ(RatingsToCsv(std::span(data.ratings).first(1)),
            "rater_id,behavior_id,score,submitted_at\nu1,b0,-1,1000\n");
}

}  // namespace
}  // namespace depra
