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

#ifndef DEPRA_TEXT_H_
#define DEPRA_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace depra::text {

// Lowercases, folds common Latin-1 accented letters to ASCII and splits on
// anything that is not a letter or digit. Stop words are kept.
std::vector<std::string> RawTokens(std::string_view text);

// RawTokens() minus English stop words and single characters.
std::vector<std::string> ContentTokens(std::string_view text);

bool IsStopWord(std::string_view token);

// Whitespace-delimited word count.
std::size_t WordCount(std::string_view text);

// Fraction of RawTokens() found in the English stop-word list; 0 for empty
// text.
double StopWordRatio(std::string_view text);

// Heuristic language check: StopWordRatio(text) >= min_ratio.
bool LooksEnglish(std::string_view text, double min_ratio = 0.2);

}  // namespace depra::text

#endif  // DEPRA_TEXT_H_
