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

#include "depra/text.h"

#include <algorithm>
#include <cctype>

namespace depra::text {
namespace {

// English stop words.
constexpr std::string_view kStopWords[] = {
    "a",        "about",   "above",   "after",    "again",   "against",
    "all",      "also",    "am",      "an",       "and",     "any",
    "are",      "as",      "at",      "be",       "because", "been",
    "before",   "being",   "below",   "between",  "both",    "but",
    "by",       "can",     "could",   "did",      "do",      "does",
    "doing",    "down",    "during",  "each",     "even",    "ever",
    "every",    "few",     "for",     "from",     "further", "get",
    "gets",     "got",     "had",     "has",      "have",    "having",
    "he",       "her",     "here",    "hers",     "herself", "him",
    "himself",  "his",     "how",     "i",        "if",      "in",
    "into",     "is",      "it",      "its",      "itself",  "just",
    "let",      "lets",    "may",     "me",       "might",   "more",
    "most",     "much",    "must",    "my",       "myself",  "no",
    "nor",      "not",     "now",     "of",       "off",     "on",
    "once",     "one",     "only",    "or",       "other",   "our",
    "ours",     "ourselves", "out",   "over",     "own",     "same",
    "shall",    "she",     "should",  "so",       "some",    "such",
    "than",     "that",    "the",     "their",    "theirs",  "them",
    "themselves", "then",  "there",   "these",    "they",    "this",
    "those",    "through", "to",      "too",      "under",   "until",
    "up",       "upon",    "us",      "very",     "via",     "was",
    "we",       "well",    "were",    "what",     "when",    "where",
    "which",    "while",   "who",     "whom",     "why",     "will",
    "with",     "within",  "without", "would",    "yet",     "you",
    "your",     "yours",   "yourself", "yourselves", "s",    "t",
};

// ASCII replacements for U+00C0..U+00FF ('\0' = drop).
constexpr char kLatin1Fold[] =
    "aaaaaaaceeeeiiii"   // C0-CF
    "dnooooo\0ouuuuyts"  // D0-DF
    "aaaaaaaceeeeiiii"   // E0-EF
    "dnooooo\0ouuuuyty";  // F0-FF

bool IsWordByte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

std::string Fold(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto c = static_cast<unsigned char>(in[i]);
    if (c < 0x80) {
      out += static_cast<char>(std::tolower(c));
      continue;
    }
    if (c == 0xC3 && i + 1 < in.size()) {
      auto next = static_cast<unsigned char>(in[i + 1]);
      if (next >= 0x80 && next <= 0xBF) {
        char folded = kLatin1Fold[next - 0x80];
        ++i;
        if (folded != '\0') out += folded;
        continue;
      }
    }
    out += static_cast<char>(c);
  }
  return out;
}

}  // namespace

bool IsStopWord(std::string_view token) {
  static const auto sorted = [] {
    std::vector<std::string_view> words(std::begin(kStopWords),
                                        std::end(kStopWords));
    std::sort(words.begin(), words.end());
    return words;
  }();
  return std::binary_search(sorted.begin(), sorted.end(), token);
}

std::vector<std::string> RawTokens(std::string_view text) {
  std::string folded = Fold(text);
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : folded) {
    if (IsWordByte(static_cast<unsigned char>(ch))) {
      current += ch;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> ContentTokens(std::string_view text) {
  auto tokens = RawTokens(text);
  std::erase_if(tokens, [](const std::string& t) {
    return t.size() < 2 || IsStopWord(t);
  });
  return tokens;
}

std::size_t WordCount(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char ch : text) {
    bool space = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

double StopWordRatio(std::string_view text) {
  auto tokens = RawTokens(text);
  if (tokens.empty()) return 0.0;
  auto hits = std::count_if(tokens.begin(), tokens.end(),
                            [](const std::string& t) { return IsStopWord(t); });
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

bool LooksEnglish(std::string_view text, double min_ratio) {
  return StopWordRatio(text) >= min_ratio;
}

}  // namespace depra::text
