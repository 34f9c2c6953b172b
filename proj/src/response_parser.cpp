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

#include "alliance/response_parser.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <vector>

#include "json.hpp"

namespace alliance {
namespace {

// Bounds the work spent on adversarial inputs with many braces.
constexpr int kMaxJsonCandidates = 64;

constexpr std::array<std::string_view, 4> kScoreKeys = {"score", "rating",
                                                        "评分", "分数"};
constexpr std::array<std::string_view, 5> kRationaleKeys = {
    "rationale", "reason", "explanation", "evidence", "理由"};
// Labels recognised at the start of a "label: value" score line.
constexpr std::array<std::string_view, 6> kScoreLabels = {
    "score", "rating", "评分", "分数", "得分", "打分"};
constexpr std::array<std::string_view, 6> kRationaleLabels = {
    "rationale", "reason", "explanation", "理由", "解释", "依据"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[i]) != prefix[i]) return false;
  }
  return true;
}

// Strips decoration such as markdown bold, quotes and list bullets.
std::string_view skip_decoration(std::string_view s) {
  while (!s.empty() && (is_space(s.front()) || s.front() == '*' ||
                        s.front() == '#' || s.front() == '"' ||
                        s.front() == '-' || s.front() == '`')) {
    s.remove_prefix(1);
  }
  return s;
}

// Consumes ':' or fullwidth '：' or '='. Returns false when absent.
bool consume_separator(std::string_view& s) {
  s = skip_decoration(s);
  if (!s.empty() && (s.front() == ':' || s.front() == '=')) {
    s.remove_prefix(1);
    return true;
  }
  constexpr std::string_view kFullwidthColon = "\xEF\xBC\x9A";
  if (s.substr(0, kFullwidthColon.size()) == kFullwidthColon) {
    s.remove_prefix(kFullwidthColon.size());
    return true;
  }
  return false;
}

struct NumberToken {
  double value = 0.0;
  bool integral = false;
};

// Leading unsigned decimal such as "4" or "4.5".
std::optional<NumberToken> leading_number(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
  if (n == 0) return std::nullopt;
  bool fraction = false;
  if (n + 1 < s.size() && s[n] == '.' && s[n + 1] >= '0' && s[n + 1] <= '9') {
    fraction = true;
    ++n;
    while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
  }
  if (n > 32) return NumberToken{1e9, false};
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + n, v);
  if (res.ec != std::errc()) return std::nullopt;
  return NumberToken{v, !fraction || v == std::floor(v)};
}

// Fills status/score for a located numeric score.
void classify_score(double value, bool integral, ParsedVerdict& out) {
  if (!integral || value != std::floor(value)) {
    out.status = ParseStatus::kOutOfRange;
    out.detail = "score is not an integer";
    return;
  }
  if (value < 1.0 || value > 5.0) {
    out.status = ParseStatus::kOutOfRange;
    out.detail = "score outside 1..5";
    return;
  }
  out.status = ParseStatus::kOk;
  out.score = static_cast<int>(value);
}

// End offset (exclusive) of the balanced {...} starting at `start`, aware of
// JSON string literals.
std::optional<std::size_t> match_brace(std::string_view s, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::nullopt;
}

const nlohmann::json* find_key(const nlohmann::json& obj,
                               const auto& candidates) {
  for (std::string_view key : candidates) {
    auto it = obj.find(key);
    if (it != obj.end()) return &*it;
  }
  // Case-insensitive fallback for keys like "Score".
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    std::string lowered;
    for (char c : it.key()) lowered += ascii_lower(c);
    for (std::string_view key : candidates) {
      if (lowered == key) return &*it;
    }
  }
  return nullptr;
}

bool try_json_route(std::string_view text, ParsedVerdict& out) {
  int tried = 0;
  std::size_t pos = 0;
  while (tried < kMaxJsonCandidates) {
    pos = text.find('{', pos);
    if (pos == std::string_view::npos) return false;
    ++tried;
    const auto end = match_brace(text, pos);
    if (!end) {
      ++pos;
      continue;
    }
    const auto candidate = text.substr(pos, *end - pos);
    const auto j = nlohmann::json::parse(candidate, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      ++pos;
      continue;
    }
    const nlohmann::json* score = find_key(j, kScoreKeys);
    if (score == nullptr) {
      pos = *end;
      continue;
    }
    out.route = ParseRoute::kJson;
    if (const auto* r = find_key(j, kRationaleKeys); r && r->is_string()) {
      out.rationale = std::string(trim(r->get<std::string>()));
    }
    if (score->is_number_integer()) {
      const auto v = score->get<long long>();
      classify_score(v < -1000 || v > 1000 ? 1e9 : static_cast<double>(v), true,
                     out);
    } else if (score->is_number_float()) {
      const double v = score->get<double>();
      classify_score(v, v == std::floor(v), out);
    } else if (score->is_string()) {
      const std::string field = score->get<std::string>();
      const auto num = leading_number(trim(field));
      if (!num) {
        out.status = ParseStatus::kUnparseable;
        out.detail = "score field is not numeric";
        return true;
      }
      classify_score(num->value, num->integral, out);
    } else {
      out.status = ParseStatus::kUnparseable;
      out.detail = "score field has unsupported type";
    }
    return true;
  }
  return false;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// Value after a score label on this line, if the line is a score line.
std::optional<NumberToken> labeled_score(std::string_view line) {
  std::string_view s = skip_decoration(line);
  for (std::string_view label : kScoreLabels) {
    if (!starts_with_ci(s, label)) continue;
    std::string_view rest = s.substr(label.size());
    if (!consume_separator(rest)) continue;
    rest = skip_decoration(rest);
    return leading_number(rest);
  }
  return std::nullopt;
}

std::string_view strip_rationale_label(std::string_view line) {
  std::string_view s = skip_decoration(line);
  for (std::string_view label : kRationaleLabels) {
    if (!starts_with_ci(s, label)) continue;
    std::string_view rest = s.substr(label.size());
    if (consume_separator(rest)) return trim(rest);
  }
  return trim(line);
}

bool try_labeled_route(std::string_view text, ParsedVerdict& out) {
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto num = labeled_score(lines[i]);
    if (!num) continue;
    out.route = ParseRoute::kLabeledLine;
    classify_score(num->value, num->integral, out);
    std::string rationale;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (k == i) continue;
      const auto piece = strip_rationale_label(lines[k]);
      if (piece.empty() || piece == "```") continue;
      if (!rationale.empty()) rationale += '\n';
      rationale += piece;
    }
    out.rationale = std::move(rationale);
    return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::kOk:
      return "ok";
    case ParseStatus::kUnparseable:
      return "unparseable";
    case ParseStatus::kOutOfRange:
      return "out_of_range";
    case ParseStatus::kMissingRationale:
      return "missing_rationale";
  }
  return "?";
}

ParsedVerdict parse_verdict(std::string_view raw, bool require_rationale) {
  ParsedVerdict out;
  try {
    std::string_view text = raw;
    constexpr std::string_view kThinkClose = "</think>";
    if (const auto p = text.rfind(kThinkClose); p != std::string_view::npos) {
      text.remove_prefix(p + kThinkClose.size());
    }
    if (!try_json_route(text, out) && !try_labeled_route(text, out)) {
      out.status = ParseStatus::kUnparseable;
      out.detail = "no score found in response";
      return out;
    }
    if (out.status == ParseStatus::kOk && require_rationale &&
        out.rationale.empty()) {
      out.status = ParseStatus::kMissingRationale;
      out.detail = "response carries a score but no rationale";
    }
  } catch (const std::exception& e) {
    out = ParsedVerdict{};
    out.detail = std::string("parser failure: ") + e.what();
  }
  return out;
}

}  // namespace alliance
