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

#include "depra/event_log.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "depra/error.h"
#include "depra/io.h"

namespace depra {
namespace {

[[noreturn]] void ThrowErrno(const std::string& what,
                             const std::filesystem::path& path) {
  throw Error(ErrorCode::kIoError,
              what + " " + path.string() + ": " + std::strerror(errno));
}

void WriteAll(int fd, const char* data, std::size_t len,
              const std::filesystem::path& path) {
  while (len > 0) {
    ssize_t n = ::write(fd, data, len);
    if (n < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("write", path);
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

void FsyncDir(const std::filesystem::path& dir) {
  int fd = ::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

LogRecovery RecoverLog(const std::filesystem::path& path,
                       std::uint64_t from_offset, bool truncate) {
  LogRecovery out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  in.close();
  if (from_offset > data.size()) {
    throw Error(ErrorCode::kCorruptLog,
                path.string() + " is shorter than the snapshot offset");
  }

  std::size_t pos = static_cast<std::size_t>(from_offset);
  std::size_t line_no = 0;
  while (pos < data.size()) {
    ++line_no;
    const std::size_t nl = data.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::size_t end = complete ? nl : data.size();
    std::optional<nlohmann::json> event;
    if (complete) {
      try {
        event = nlohmann::json::parse(data.begin() + pos, data.begin() + end);
      } catch (const nlohmann::json::parse_error&) {
      }
    }
    if (!event) {
      if (complete && end + 1 < data.size()) {
        throw Error(ErrorCode::kCorruptLog,
                    path.string() + ": unparsable event at line " +
                        std::to_string(line_no) + " followed by more data");
      }
      out.discarded_bytes = data.size() - pos;
      break;
    }
    out.events.push_back(std::move(*event));
    pos = end + 1;
  }
  out.valid_bytes = data.size() - out.discarded_bytes;
  if (truncate && out.discarded_bytes > 0) {
    std::filesystem::resize_file(path, out.valid_bytes);
  }
  return out;
}

EventLog::EventLog(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) ThrowErrno("open", path);
  struct stat st {};
  if (::fstat(fd_, &st) != 0) ThrowErrno("stat", path);
  size_ = static_cast<std::uint64_t>(st.st_size);
  FsyncDir(path.parent_path());
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint64_t EventLog::Append(const nlohmann::json& event) {
  std::string line = event.dump();
  line.push_back('\n');
  std::lock_guard lock(mu_);
  try {
    WriteAll(fd_, line.data(), line.size(), path_);
    if (::fsync(fd_) != 0) ThrowErrno("fsync", path_);
  } catch (...) {
    // Drop whatever part of the line reached the file.
    if (::ftruncate(fd_, static_cast<off_t>(size_)) != 0) {
      // The partial tail is still removed by the next recovery.
    }
    throw;
  }
  size_ += line.size();
  return size_;
}

std::uint64_t EventLog::size() const {
  std::lock_guard lock(mu_);
  return size_;
}

void WriteSnapshot(const std::filesystem::path& path, const Snapshot& snap) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  const std::string text =
      nlohmann::json{{"log_offset", snap.log_offset}, {"state", snap.state}}
          .dump() +
      "\n";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) ThrowErrno("open", tmp);
  try {
    WriteAll(fd, text.data(), text.size(), tmp);
    if (::fsync(fd) != 0) ThrowErrno("fsync", tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  std::filesystem::rename(tmp, path);
  FsyncDir(path.parent_path());
}

std::optional<Snapshot> ReadSnapshot(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const auto j = io::ReadJsonFile(path);
    Snapshot snap;
    snap.log_offset = j.at("log_offset").get<std::uint64_t>();
    snap.state = j.at("state");
    return snap;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace depra
