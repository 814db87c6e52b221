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

#ifndef DEPRA_IO_H_
#define DEPRA_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace depra::io {

// All readers throw depra::Error: kIoError when the file cannot be opened,
// kMalformedRecord (with the line number for JSON-lines) on parse failures.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

// Calls `fn(line_number, value)` for each non-blank line.
void ForEachJsonLine(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

// Pretty-printed, keys sorted, trailing newline. Output is byte-stable for
// equal values.
std::string Dump(const nlohmann::json& value);
void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::json& value);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Quotes a CSV field when it contains a separator, quote or newline.
std::string CsvField(std::string_view field);
// Shortest round-trip decimal form of `value`.
std::string FormatDouble(double value);

}  // namespace depra::io

#endif  // DEPRA_IO_H_
