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

#ifndef ALLIANCE_PROMPT_HPP_
#define ALLIANCE_PROMPT_HPP_

#include <string>

#include "alliance/domain.hpp"

namespace alliance {

enum class Language { kZh, kEn };

std::string_view to_string(Language l);
Language parse_language(std::string_view s);

// Wording around the transcript and the questionnaire item. Every field is
// user-configurable; defaults() supplies our own phrasing.
struct PromptSpec {
  Language language = Language::kZh;
  std::string system_preamble;
  std::string transcript_header;
  std::string item_header;
  std::string scale_description;
  // Must ask for {"rationale": string, "score": integer 1..5}.
  std::string output_contract;
  // Draft mode: asks for an evidence-grounded explanation of a known rating.
  std::string draft_instruction;

  static PromptSpec defaults(Language language = Language::kZh);
};

// One "Counselor: ..." / "Client: ..." line per utterance, in order.
std::string render_transcript(const Session& session);

// Deterministic. Contains every utterance in order, the item text verbatim,
// and ends with the output contract.
std::string build_prompt(const Session& session, const WaiItem& item,
                         const PromptSpec& spec);

// Annotation-assist prompt: states the client's actual rating and asks for
// the supporting evidence only.
std::string build_draft_prompt(const Session& session, const WaiItem& item,
                               int true_score, const PromptSpec& spec);

}  // namespace alliance

#endif  // ALLIANCE_PROMPT_HPP_
