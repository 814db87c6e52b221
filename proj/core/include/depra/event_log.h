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

#ifndef DEPRA_EVENT_LOG_H_
#define DEPRA_EVENT_LOG_H_

// Append-only JSON-lines log. Each event is one line written with a single
// write() and made durable with fsync() before Append returns, so a crash
// leaves at most one trailing partial line, which recovery removes.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace depra {

struct LogRecovery {
  std::vector<nlohmann::json> events;  // events at or after `from_offset`
  std::uint64_t valid_bytes = 0;       // length of the intact prefix
  std::uint64_t discarded_bytes = 0;   // partial tail that was cut off
};

// Reads the log from byte `from_offset` (which must sit on a line
// boundary). A final line without its newline, or one that does not parse,
// is treated as an interrupted append: it is dropped and, when `truncate`
// is set, cut from the file. A bad line followed by further data raises
// kCorruptLog. A missing file recovers as empty.
LogRecovery RecoverLog(const std::filesystem::path& path,
                       std::uint64_t from_offset = 0, bool truncate = true);

class EventLog {
 public:
  // Opens (creating if needed) for appending. Run RecoverLog first so the
  // file ends on a line boundary.
  explicit EventLog(const std::filesystem::path& path);
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  // Durably appends one event; returns the file size afterwards. Throws
  // kIoError, in which case the event must be treated as not written.
  std::uint64_t Append(const nlohmann::json& event);

  std::uint64_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
  mutable std::mutex mu_;
};

// Snapshot file: {"log_offset": N, "state": {...}}, replaced atomically via
// write-to-temp, fsync and rename.
struct Snapshot {
  std::uint64_t log_offset = 0;
  nlohmann::json state;
};

void WriteSnapshot(const std::filesystem::path& path, const Snapshot& snap);
// nullopt when the file is absent or unreadable; a damaged snapshot is
// ignored and the log is replayed from the start instead.
std::optional<Snapshot> ReadSnapshot(const std::filesystem::path& path);

}  // namespace depra

#endif  // DEPRA_EVENT_LOG_H_
