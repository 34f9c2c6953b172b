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


#include <random>
#include <regex>

#include "alliance/prompt.hpp"
#include "alliance/response_parser.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace alliance;

namespace {

// Labelled-line oracle: the first "label sep number" line, by regex.
std::optional<int> regex_labeled_score(const std::string& text) {
  static const std::regex re(
      R"((?:^|\n)[\s*#"`-]*(?:[Ss]core|[Rr]ating|评分|分数|得分|打分)[\s*"`-]*(?::|=|：)[\s*"`-]*([0-9]+)(?![0-9.]))");
  std::smatch m;
  if (!std::regex_search(text, m, re)) return std::nullopt;
  return std::stoi(m[1].str());
}

std::string random_fuzz(std::mt19937_64& rng) {
  static const std::vector<std::string> atoms = {
      "{", "}", "\"", ":", "：", "score", "Score", "评分", "rationale", "理由", "\n", " ",
      "1", "3", "5", "7", "4.5", "-", "```json", "</think>", "<think>", "\\", "null", ",",
      "目标", "😀", "\xC3", "\xFF", "\xE4\xBD", "\x80", std::string(1, '\0'), "[", "]", "e9"};
  std::string s;
  const int n = std::uniform_int_distribution<int>(0, 40)(rng);
  for (int i = 0; i < n; ++i) {
    if (rng() % 5 == 0) {
      s += static_cast<char>(rng() % 256);
    } else {
      s += atoms[rng() % atoms.size()];
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("prompt_parser") {

TEST_CASE("prompts contain every turn, the item text and end with the contract") {
  const auto& inv = placeholder_inventory();
  const Session s = testing::tiny_session("s1", "c1");
  const auto& item = inv.item("task_3");
  for (Language lang : {Language::kZh, Language::kEn}) {
    const auto spec = PromptSpec::defaults(lang);
    const auto p = build_prompt(s, item, spec);
    CHECK(p.find(s.utterances[0].text) != std::string::npos);
    CHECK(p.find(s.utterances[1].text) != std::string::npos);
    CHECK(p.find(item.client_text) != std::string::npos);
    CHECK(p.size() >= spec.output_contract.size());
    CHECK(p.compare(p.size() - spec.output_contract.size(), std::string::npos,
                    spec.output_contract) == 0);
    CHECK(p == build_prompt(s, item, spec));
  }
}

TEST_CASE("a 200-turn transcript keeps every turn in order") {
  Session s = testing::tiny_session("s1", "c1");
  s.utterances.clear();
  for (int i = 0; i < 200; ++i) {
    s.utterances.push_back({i, i % 2 ? Speaker::kClient : Speaker::kCounselor,
                            "turn-" + std::to_string(i) + "-end", {}, {}});
  }
  const auto p = build_prompt(s, placeholder_inventory().items()[0], PromptSpec::defaults());
  std::size_t pos = 0;
  for (int i = 0; i < 200; ++i) {
    const auto found = p.find("turn-" + std::to_string(i) + "-end", pos);
    REQUIRE(found != std::string::npos);
    pos = found;
  }
  CHECK(render_transcript(s).find("Counselor: turn-0-end\nClient: turn-1-end\n") == 0);
}

TEST_CASE("draft prompts state the true rating") {
  const Session s = testing::tiny_session("s1", "c1");
  const auto& item = placeholder_inventory().items()[0];
  const auto p = build_draft_prompt(s, item, 2, PromptSpec::defaults());
  CHECK(p.find("2 分") != std::string::npos);
  const auto e = build_draft_prompt(s, item, 2, PromptSpec::defaults(Language::kEn));
  CHECK(e.find("rating for this item: 2.") != std::string::npos);
  CHECK_THROWS_AS(build_draft_prompt(s, item, 6, PromptSpec::defaults()), ConfigError);
}

TEST_CASE("every response style gets its expected classification") {
  const auto styles = testing::response_styles();
  REQUIRE(styles.size() >= 20);
  for (const auto& st : styles) {
    CAPTURE(st.name);
    const auto v = parse_verdict(st.raw, true);
    CHECK(v.status == st.status);
    if (st.status == ParseStatus::kOk) {
      CHECK(v.score == st.score);
      CHECK_FALSE(v.rationale.empty());
    } else {
      CHECK_FALSE(v.detail.empty());
    }
  }
}

TEST_CASE("labelled-line scores agree with a regex oracle") {
  const std::vector<std::string> cases = {
      "Score: 3\n理由: 来访者态度积极", "评分：4\n理由：认同", "**Score**: 5\nok",
      "Rating = 2\nreason = none", "理由：有所保留\n分数：1", "- score: 4\nnotes",
      "得分: 3\n依据: 对话", "Some preamble\nScore: 2\nand more"};
  for (const auto& c : cases) {
    CAPTURE(c);
    const auto v = parse_verdict(c, true);
    REQUIRE(v.ok());
    CHECK(v.route == ParseRoute::kLabeledLine);
    CHECK(v.score == regex_labeled_score(c));
  }
}

TEST_CASE("the rationale is taken from the reply") {
  auto v = parse_verdict(R"({"rationale": "  来访者认同目标。 ", "score": 4})", true);
  CHECK(v.rationale == "来访者认同目标。");
  v = parse_verdict("Score: 3\n理由: 来访者态度积极", true);
  CHECK(v.rationale == "来访者态度积极");
  v = parse_verdict(R"({"score": 3})", false);
  CHECK(v.ok());
  CHECK(v.score == 3);
}

TEST_CASE("fuzzed inputs never crash and always classify") {
  std::mt19937_64 rng(2026);
  int ok = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto raw = random_fuzz(rng);
    const auto v = parse_verdict(raw, i % 2 == 0);
    if (v.ok()) {
      REQUIRE(v.score.has_value());
      CHECK(*v.score >= 1);
      CHECK(*v.score <= 5);
      ++ok;
    } else {
      CHECK_FALSE(v.detail.empty());
    }
  }
  CHECK(ok < 10000);
}

}  // TEST_SUITE
