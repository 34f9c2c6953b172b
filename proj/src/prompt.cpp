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

#include "alliance/prompt.hpp"

namespace alliance {

std::string_view to_string(Language l) { return l == Language::kZh ? "zh" : "en"; }

Language parse_language(std::string_view s) {
  if (s == "zh") return Language::kZh;
  if (s == "en") return Language::kEn;
  throw ConfigError("unknown prompt language '" + std::string(s) + "'");
}

PromptSpec PromptSpec::defaults(Language language) {
  PromptSpec p;
  p.language = language;
  if (language == Language::kZh) {
    p.system_preamble =
        "你是一名资深的心理咨询督导。下面是一段心理咨询对话的完整记录。"
        "请站在来访者的角度，判断来访者在咨询结束后会如何回答问卷中的题目。";
    p.transcript_header = "【对话记录】";
    p.item_header = "【问卷题目】";
    p.scale_description =
        "评分标准：1 = 很少（Seldom），2 = 有时（Sometimes），3 = 较常（Fairly "
        "Often），4 = 经常（Very Often），5 = 总是（Always）。";
    p.output_contract =
        "请先从对话中找出支持你判断的证据并给出理由，再给出评分。"
        "只输出一个 JSON 对象，格式为 {\"rationale\": \"理由\", \"score\": "
        "1到5之间的整数}。";
    p.draft_instruction =
        "请根据对话内容，写一段有证据支撑的理由，解释来访者为什么给出这个评分。"
        "只输出理由文本。";
  } else {
    p.system_preamble =
        "You are an experienced counseling supervisor. Below is the full "
        "transcript of a counseling session. Taking the client's perspective, "
        "judge how the client would answer the questionnaire item after the "
        "session.";
    p.transcript_header = "[Transcript]";
    p.item_header = "[Questionnaire item]";
    p.scale_description =
        "Scale: 1 = Seldom, 2 = Sometimes, 3 = Fairly Often, 4 = Very Often, "
        "5 = Always.";
    p.output_contract =
        "First cite evidence from the conversation and explain your reasoning, "
        "then give the score. Output only one JSON object of the form "
        "{\"rationale\": \"...\", \"score\": <integer 1-5>}.";
    p.draft_instruction =
        "Write an evidence-grounded rationale, citing the conversation, that "
        "explains why the client gave this rating. Output the rationale text "
        "only.";
  }
  return p;
}

std::string render_transcript(const Session& session) {
  std::string out;
  for (const auto& u : session.utterances) {
    out += to_string(u.speaker);
    out += ": ";
    out += u.text;
    out += '\n';
  }
  return out;
}

namespace {

std::string prompt_head(const Session& session, const WaiItem& item,
                        const PromptSpec& spec) {
  std::string out;
  out += spec.system_preamble;
  out += "\n\n";
  out += spec.transcript_header;
  out += '\n';
  out += render_transcript(session);
  out += '\n';
  out += spec.item_header;
  out += '\n';
  out += item.client_text;
  out += "\n\n";
  out += spec.scale_description;
  out += "\n\n";
  return out;
}

}  // namespace

std::string build_prompt(const Session& session, const WaiItem& item,
                         const PromptSpec& spec) {
  return prompt_head(session, item, spec) + spec.output_contract;
}

std::string build_draft_prompt(const Session& session, const WaiItem& item,
                               int true_score, const PromptSpec& spec) {
  if (true_score < kMinRating || true_score > kMaxRating) {
    throw ConfigError("true score must lie in 1..5");
  }
  std::string rating_line =
      spec.language == Language::kZh
          ? "来访者对该题目的实际评分：" + std::to_string(true_score) + " 分。"
          : "The client's actual rating for this item: " +
                std::to_string(true_score) + ".";
  return prompt_head(session, item, spec) + rating_line + "\n\n" +
         spec.draft_instruction;
}

}  // namespace alliance
