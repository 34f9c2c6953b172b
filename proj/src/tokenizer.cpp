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

#include "alliance/tokenizer.hpp"

#include <algorithm>

#include "alliance/errors.hpp"

namespace alliance {
namespace {

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200B;
  }
}

}  // namespace

std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if (b0 < 0x80) {
      len = 1; cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4; cp = b0 & 0x07; min = 0x10000;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (ok && len > 1 &&
        (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    if (!ok) {
      out.push_back({0xFFFD, i, 1});
      ++i;
      continue;
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x2E80 && cp <= 0x2FDF) ||    // radicals
         (cp >= 0x3001 && cp <= 0x303F) ||    // CJK symbols and punctuation
         (cp >= 0x3040 && cp <= 0x30FF) ||    // kana
         (cp >= 0x3100 && cp <= 0x31BF) ||    // bopomofo
         (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0x4E00 && cp <= 0x9FFF) ||
         (cp >= 0xAC00 && cp <= 0xD7AF) ||    // hangul syllables
         (cp >= 0xF900 && cp <= 0xFAFF) ||
         (cp >= 0xFE30 && cp <= 0xFE4F) ||    // compatibility forms
         (cp >= 0xFF00 && cp <= 0xFFEF) ||    // half/full-width forms
         (cp >= 0x20000 && cp <= 0x3FFFF);
}

bool is_registered_tokenizer(std::string_view id) {
  return id == kCharCjk || id == kWhitespace || id == kLexiconGreedy;
}

Tokenizer::Tokenizer(std::string_view id, std::vector<std::string> lexicon)
    : id_(id) {
  if (!is_registered_tokenizer(id)) {
    throw ConfigError("unknown tokenizer '" + std::string(id) +
                      "' (expected char-cjk, whitespace or lexicon-greedy)");
  }
  for (auto& w : lexicon) {
    if (w.empty()) continue;
    max_word_bytes_ = std::max(max_word_bytes_, w.size());
    lexicon_.insert(std::move(w));
  }
}

TokenizedText Tokenizer::operator()(std::string_view text) const {
  TokenizedText out{std::string(text), {}, id_};
  const auto cps = decode_utf8(text);
  const bool split_cjk = id_ != kWhitespace;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.tokens.push_back(std::move(word));
    word.clear();
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    const CodePoint& c = cps[i];
    if (is_space(c.value)) {
      flush();
      ++i;
      continue;
    }
    if (!split_cjk || !is_cjk(c.value)) {
      word.append(text.substr(c.offset, c.length));
      ++i;
      continue;
    }
    flush();
    std::size_t take = 1;
    if (!lexicon_.empty()) {
      // Longest lexicon word that starts here and stays inside the CJK run.
      std::size_t j = i;
      while (j < cps.size() && is_cjk(cps[j].value) && !is_space(cps[j].value) &&
             cps[j].offset + cps[j].length - c.offset <= max_word_bytes_) {
        ++j;
      }
      for (; j > i + 1; --j) {
        const std::size_t end = cps[j - 1].offset + cps[j - 1].length;
        if (lexicon_.contains(text.substr(c.offset, end - c.offset))) {
          take = j - i;
          break;
        }
      }
    }
    const std::size_t end = cps[i + take - 1].offset + cps[i + take - 1].length;
    out.tokens.emplace_back(text.substr(c.offset, end - c.offset));
    i += take;
  }
  flush();
  return out;
}

TokenizedText tokenize(std::string_view text, std::string_view tokenizer_id) {
  return Tokenizer(tokenizer_id)(text);
}

}  // namespace alliance
