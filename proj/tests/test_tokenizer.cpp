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
#include "alliance/errors.hpp"

#include "alliance/tokenizer.hpp"
#include "doctest.h"

using namespace alliance;

using Tokens = std::vector<std::string>;

TEST_SUITE("tokenizer") {

TEST_CASE("char-cjk splits ideographs one per token") {
  CHECK(tokenize("目标一致").tokens == Tokens{"目", "标", "一", "致"});
  CHECK(tokenize("目标一致").tokenizer_id == "char-cjk");
  CHECK(tokenize("目标一致").original == "目标一致");
}

TEST_CASE("char-cjk keeps non-CJK runs whole and splits them on whitespace") {
  CHECK(tokenize("来访者说 set goals 了").tokens ==
        Tokens{"来", "访", "者", "说", "set", "goals", "了"});
  CHECK(tokenize("CBT疗法").tokens == Tokens{"CBT", "疗", "法"});
  CHECK(tokenize("好，很好。").tokens == Tokens{"好", "，", "很", "好", "。"});
  CHECK(tokenize("ｆｕｌｌ").tokens.size() == 4);
}

TEST_CASE("whitespace splits on ASCII and Unicode spaces only") {
  CHECK(tokenize("set goals", kWhitespace).tokens == Tokens{"set", "goals"});
  CHECK(tokenize("  a\tb\n c  ", kWhitespace).tokens == Tokens{"a", "b", "c"});
  CHECK(tokenize("目标　一致", kWhitespace).tokens == Tokens{"目标", "一致"});
}

TEST_CASE("empty input gives no tokens") {
  for (auto id : {kCharCjk, kWhitespace, kLexiconGreedy}) {
    CHECK(tokenize("", id).tokens.empty());
    CHECK(tokenize("   ", id).tokens.empty());
  }
}

TEST_CASE("lexicon-greedy takes the longest lexicon word first") {
  Tokenizer t(kLexiconGreedy, {"解决", "解决问题", "目标"});
  CHECK(t("我们解决问题的目标").tokens == Tokens{"我", "们", "解决问题", "的", "目标"});
  CHECK(t("解决了").tokens == Tokens{"解决", "了"});
  CHECK(t("plan A目标").tokens == Tokens{"plan", "A", "目标"});
  CHECK(t.id() == "lexicon-greedy");
}

TEST_CASE("unknown tokenizers are rejected") {
  CHECK_THROWS_AS(Tokenizer("jieba"), ConfigError);
  CHECK_THROWS_AS(tokenize("x", "bpe"), ConfigError);
  CHECK(is_registered_tokenizer("char-cjk"));
  CHECK_FALSE(is_registered_tokenizer("bpe"));
}

TEST_CASE("tokens preserve order and cover every non-space character") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> atoms = {"目", "标", "a", "b", " ", "，", "😀", "　", "Z"};
  for (int t = 0; t < 200; ++t) {
    std::string s;
    for (int i = 0; i < 30; ++i) s += atoms[rng() % atoms.size()];
    std::string joined, stripped;
    for (const auto& tok : tokenize(s).tokens) joined += tok;
    for (std::size_t i = 0; i < s.size();) {
      if (s[i] == ' ') {
        ++i;
      } else if (s.compare(i, 3, "　") == 0) {
        i += 3;
      } else {
        stripped += s[i++];
      }
    }
    CHECK(joined == stripped);
    CHECK(tokenize(s).tokens == tokenize(s).tokens);
  }
}

TEST_CASE("decoding marks invalid bytes") {
  const auto cps = decode_utf8("a\xFF目");
  REQUIRE(cps.size() == 3);
  CHECK(cps[0].value == U'a');
  CHECK(cps[1].value == 0xFFFD);
  CHECK(cps[1].length == 1);
  CHECK(cps[2].value == U'目');
  CHECK(cps[2].offset == 2);
  CHECK(is_cjk(U'目'));
  CHECK(is_cjk(U'。'));
  CHECK_FALSE(is_cjk(U'a'));
  CHECK_FALSE(tokenize("\xFF\xFE").tokens.empty());
}

}  // TEST_SUITE
