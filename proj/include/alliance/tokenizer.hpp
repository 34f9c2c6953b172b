// Copyright 2026 The Alliance Eval Authors.
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

// Tokenizers shared by the rationale metrics and the lexical analysis.
//
//   char-cjk        every CJK character (ideographs, CJK punctuation and
//                   full-width forms) is one token; other runs split on
//                   whitespace.
//   whitespace      split on ASCII and Unicode whitespace only.
//   lexicon-greedy  like char-cjk, but inside CJK runs the longest lexicon
//                   word starting at each position is taken first.

#ifndef ALLIANCE_TOKENIZER_HPP_
#define ALLIANCE_TOKENIZER_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace alliance {

inline constexpr std::string_view kCharCjk = "char-cjk";
inline constexpr std::string_view kWhitespace = "whitespace";
inline constexpr std::string_view kLexiconGreedy = "lexicon-greedy";

struct TokenizedText {
  std::string original;
  std::vector<std::string> tokens;
  std::string tokenizer_id;
};

class Tokenizer {
 public:
  // Throws ConfigError for an unregistered id. The lexicon is only used by
  // lexicon-greedy.
  explicit Tokenizer(std::string_view id = kCharCjk,
                     std::vector<std::string> lexicon = {});

  TokenizedText operator()(std::string_view text) const;
  const std::string& id() const { return id_; }

 private:
  std::string id_;
  std::set<std::string, std::less<>> lexicon_;
  std::size_t max_word_bytes_ = 0;
};

TokenizedText tokenize(std::string_view text, std::string_view tokenizer_id = kCharCjk);

bool is_registered_tokenizer(std::string_view id);

// Unicode decoding helpers. Invalid bytes decode to U+FFFD, one per byte.
struct CodePoint {
  char32_t value;
  std::size_t offset;
  std::size_t length;
};
std::vector<CodePoint> decode_utf8(std::string_view s);
bool is_cjk(char32_t cp);

}  // namespace alliance

#endif  // ALLIANCE_TOKENIZER_HPP_
