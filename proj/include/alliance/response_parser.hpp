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

// Extracts {rationale, score} from a model reply.
//
// Routes, in order:
//   1. the first JSON object in the text carrying a "score" key (fenced
//      blocks and surrounding prose are fine);
//   2. a labelled line such as "Score: 3" or "评分：4", with the remaining
//      lines taken as the rationale.
// A reasoning block closed by "</think>" is skipped. Scores must be
// integers in 1..5; "4.5" or "7" are range errors, never clamped.

#ifndef ALLIANCE_RESPONSE_PARSER_HPP_
#define ALLIANCE_RESPONSE_PARSER_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace alliance {

enum class ParseStatus {
  kOk,
  kUnparseable,       // no score found in any route
  kOutOfRange,        // score found but not an integer in 1..5
  kMissingRationale,  // score fine, rationale required but empty
};

enum class ParseRoute { kNone, kJson, kLabeledLine };

struct ParsedVerdict {
  ParseStatus status = ParseStatus::kUnparseable;
  ParseRoute route = ParseRoute::kNone;
  std::optional<int> score;
  std::string rationale;
  std::string detail;  // human-readable reason for non-OK outcomes

  bool ok() const { return status == ParseStatus::kOk; }
};

std::string_view to_string(ParseStatus s);

// Total over arbitrary bytes: never throws.
ParsedVerdict parse_verdict(std::string_view raw, bool require_rationale);

}  // namespace alliance

#endif  // ALLIANCE_RESPONSE_PARSER_HPP_
