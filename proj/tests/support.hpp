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


// Helpers shared by the unit tests and the acceptance binary.

#ifndef ALLIANCE_TESTS_SUPPORT_HPP_
#define ALLIANCE_TESTS_SUPPORT_HPP_

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/response_parser.hpp"
#include "alliance/synth.hpp"

namespace testing {

// Fresh directory under ALLIANCE_TEST_TMP (or the system temp dir).
inline std::filesystem::path temp_dir(const std::string& name) {
  const char* root = std::getenv("ALLIANCE_TEST_TMP");
  std::filesystem::path base =
      root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() / "alliance_tests";
  const auto dir = base / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline alliance::ItemRatings uniform_ratings(int value) {
  alliance::ItemRatings r;
  for (const auto& item : alliance::placeholder_inventory().items()) r[item.item_id] = value;
  return r;
}

// Minimal valid session: one counselor and one client turn.
inline alliance::Session tiny_session(const std::string& id, const std::string& client,
                                      int rating = 4) {
  alliance::Session s;
  s.session_id = id;
  s.client_id = client;
  s.counselor_id = "t01";
  s.utterances = {{0, alliance::Speaker::kCounselor, "你好，今天想聊些什么？", {}, {}},
                  {1, alliance::Speaker::kClient, "最近工作压力很大。", {}, {}}};
  s.client_item_ratings = uniform_ratings(rating);
  return s;
}

inline alliance::SynthCorpus default_corpus(std::uint64_t seed = 1) {
  alliance::SynthConfig cfg;
  cfg.seed = seed;
  return alliance::synth_corpus(cfg, alliance::placeholder_inventory());
}

// Candidate/reference pairs mixing CJK, Latin words and punctuation, with
// shared material so every n-gram order gets some matches.
inline std::vector<std::pair<std::string, std::string>> rationale_pairs(std::uint64_t seed,
                                                                        int n) {
  static const std::vector<std::string> atoms = {
      "目标", "来访者", "咨询师", "一致", "改变", "方法", "支持", "理解", "，", "。",
      "the ", "client ", "goal ", "agrees ", "新", "了", "的", "是", "感受", "😀"};
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i < n; ++i) {
    std::string shared;
    const int len = 4 + static_cast<int>(rng() % 20);
    for (int k = 0; k < len; ++k) shared += atoms[rng() % atoms.size()];
    std::string cand = shared, ref = shared;
    const auto extra_c = rng() % 8, extra_r = rng() % 8;
    for (std::uint64_t k = 0; k < extra_c; ++k) cand += atoms[rng() % atoms.size()];
    for (std::uint64_t k = 0; k < extra_r; ++k) ref.insert(0, atoms[rng() % atoms.size()]);
    if (i % 7 == 3) std::swap(cand, ref);
    out.emplace_back(cand, ref);
  }
  return out;
}

struct ResponseStyle {
  std::string name;
  std::string raw;
  alliance::ParseStatus status;
  std::optional<int> score;
};

// Reply styles seen from chat models, with the classification each must get.
inline std::vector<ResponseStyle> response_styles() {
  using alliance::ParseStatus;
  return {
      {"clean json", R"({"rationale": "来访者认同目标。", "score": 4})", ParseStatus::kOk, 4},
      {"json score first", R"({"score": 2, "rationale": "分歧明显"})", ParseStatus::kOk, 2},
      {"fenced json", "```json\n{\"rationale\": \"ok\", \"score\": 5}\n```", ParseStatus::kOk, 5},
      {"fenced json with prose",
       "Here is my assessment.\n```json\n{\"rationale\": \"clear plan\", \"score\": 3}\n```\nThanks.",
       ParseStatus::kOk, 3},
      {"inline json in prose", "My answer is {\"rationale\":\"good bond\",\"score\":5} done.",
       ParseStatus::kOk, 5},
      {"string score", R"({"rationale": "x", "score": "4"})", ParseStatus::kOk, 4},
      {"capitalised keys", R"({"Rationale": "x", "Score": 1})", ParseStatus::kOk, 1},
      {"chinese keys", R"({"理由": "咨询师表达了理解", "评分": 5})", ParseStatus::kOk, 5},
      {"reasoning block",
       "<think>The client says {\"score\": 1} maybe</think>\n{\"rationale\": \"r\", \"score\": 3}",
       ParseStatus::kOk, 3},
      {"labelled prose", "Score: 4\nThe client agrees on the goals.", ParseStatus::kOk, 4},
      {"labelled chinese", "评分：3\n理由：来访者对任务有保留。", ParseStatus::kOk, 3},
      {"markdown bold label", "**Rationale**: steady rapport\n**Score**: 5", ParseStatus::kOk, 5},
      {"label with equals", "rating = 2\nreason = little agreement", ParseStatus::kOk, 2},
      {"fractional json", R"({"rationale": "x", "score": 4.5})", ParseStatus::kOutOfRange, {}},
      {"json above range", R"({"rationale": "x", "score": 7})", ParseStatus::kOutOfRange, {}},
      {"json zero", R"({"rationale": "x", "score": 0})", ParseStatus::kOutOfRange, {}},
      {"labelled fraction", "Score: 3.5\nsomewhat", ParseStatus::kOutOfRange, {}},
      {"refusal english", "I'm sorry, but I can't rate this conversation.",
       ParseStatus::kUnparseable, {}},
      {"refusal chinese", "抱歉，我无法对这段对话进行评分。", ParseStatus::kUnparseable, {}},
      {"empty reply", "", ParseStatus::kUnparseable, {}},
      {"truncated json", R"({"rationale": "the client", "sco)", ParseStatus::kUnparseable, {}},
      {"non numeric score", R"({"rationale": "x", "score": "high"})", ParseStatus::kUnparseable,
       {}},
      {"score without rationale", R"({"score": 3})", ParseStatus::kMissingRationale, {}},
      {"null score", R"({"rationale": "x", "score": null})", ParseStatus::kUnparseable, {}},
  };
}

}  // namespace testing

#endif  // ALLIANCE_TESTS_SUPPORT_HPP_
