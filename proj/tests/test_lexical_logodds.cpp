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


#include <algorithm>
#include <cmath>

#include "alliance/lexical_logodds.hpp"
#include "alliance/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace alliance;

namespace {

CountTable table(std::map<std::string, std::int64_t> counts) {
  CountTable t;
  t.tokenizer_id = "whitespace";
  for (const auto& [w, c] : counts) {
    t.counts[w] = c;
    t.total += c;
  }
  return t;
}

// Direct evaluation of the weighted log-odds formula for one word.
WordLogOdds plug_in(const std::string& w, const CountTable& t, const CountTable& c,
                    const Prior& prior) {
  double a0 = 0;
  for (const auto& [k, v] : prior) a0 += v;
  const double a = prior.at(w);
  const double yt = static_cast<double>(t.count(w)), yc = static_cast<double>(c.count(w));
  const double nt = static_cast<double>(t.total), nc = static_cast<double>(c.total);
  const double delta = std::log((yt + a) / (nt + a0 - yt - a)) - std::log((yc + a) / (nc + a0 - yc - a));
  const double var = 1.0 / (yt + a) + 1.0 / (yc + a);
  return {w, delta, var, delta / std::sqrt(var)};
}

const WordLogOdds& find(const std::vector<WordLogOdds>& v, const std::string& w) {
  for (const auto& x : v) {
    if (x.word == w) return x;
  }
  throw std::runtime_error("word not found: " + w);
}

}  // namespace

TEST_SUITE("lexical_logodds") {

TEST_CASE("unigram counting") {
  const TokenizedText t{"", {"a", "b", "a"}, "whitespace"};
  const auto c = count_unigrams({t});
  CHECK(c.count("a") == 2);
  CHECK(c.count("b") == 1);
  CHECK(c.count("z") == 0);
  CHECK(c.total == 3);
  CHECK(count_unigrams({}).total == 0);

  const TokenizedText u{"", {"b", "c"}, "whitespace"};
  const TokenizedText joined{"", {"a", "b", "a", "b", "c"}, "whitespace"};
  auto summed = count_unigrams({t});
  summed.add(count_unigrams({u}));
  CHECK(summed.counts == count_unigrams({joined}).counts);
  CHECK(summed.total == 5);

  const TokenizedText other{"", {"a"}, "char-cjk"};
  CHECK_THROWS_AS(count_unigrams({t, other}), ConfigError);
  auto mixed = count_unigrams({t});
  CHECK_THROWS_AS(mixed.add(count_unigrams({other})), ConfigError);
}

TEST_CASE("equal corpora give zero log-odds") {
  const auto a = table({{"x", 5}, {"y", 2}, {"z", 9}});
  for (double scale : {0.1, 1.0, 10.0}) {
    auto pooled = a;
    pooled.add(a);
    for (const auto& r : log_odds(a, a, make_prior(pooled, scale))) {
      CHECK(r.delta == 0.0);
      CHECK(r.z == 0.0);
      CHECK(r.variance > 0.0);
    }
  }
}

TEST_CASE("swapped single-word corpora give opposite deltas") {
  const auto t = table({{"a", 10}});
  const auto c = table({{"b", 10}});
  const Prior prior{{"a", 1.0}, {"b", 1.0}};
  const auto r = log_odds(t, c, prior);
  const auto& a = find(r, "a");
  const auto& b = find(r, "b");
  CHECK(a.delta > 0.0);
  CHECK(b.delta < 0.0);
  CHECK(a.delta == doctest::Approx(-b.delta));
  CHECK(a.delta == doctest::Approx(2 * std::log(11.0)));
  CHECK(r.front().word == "a");
}

TEST_CASE("log-odds match the plug-in formula and are antisymmetric") {
  const auto t = table({{"a", 12}, {"b", 3}, {"c", 0}, {"d", 7}});
  const auto c = table({{"a", 2}, {"b", 9}, {"d", 7}, {"e", 4}});
  auto pooled = t;
  pooled.add(c);
  const auto prior = make_prior(pooled, 0.5, 0.1);
  const auto fwd = log_odds(t, c, prior);
  const auto back = log_odds(c, t, prior);
  for (const auto& r : fwd) {
    const auto o = plug_in(r.word, t, c, prior);
    CHECK(std::abs(r.delta - o.delta) < 1e-12);
    CHECK(std::abs(r.variance - o.variance) < 1e-12);
    CHECK(std::abs(r.z - o.z) < 1e-12);
    const auto& s = find(back, r.word);
    CHECK(std::abs(r.delta + s.delta) < 1e-12);
    CHECK(std::abs(r.z + s.z) < 1e-12);
    CHECK(r.variance == s.variance);
  }
  for (std::size_t i = 1; i < fwd.size(); ++i) CHECK(fwd[i - 1].z >= fwd[i].z);
}

TEST_CASE("a larger prior offset shrinks every z") {
  const auto t = table({{"a", 12}, {"b", 3}, {"d", 7}});
  const auto c = table({{"a", 2}, {"b", 9}, {"d", 1}});
  auto pooled = t;
  pooled.add(c);
  std::map<std::string, double> previous;
  for (double offset : {0.0, 0.5, 2.0, 10.0, 100.0}) {
    for (const auto& r : log_odds(t, c, make_prior(pooled, 1.0, offset))) {
      if (previous.count(r.word)) CHECK(std::abs(r.z) <= previous[r.word] + 1e-12);
      previous[r.word] = std::abs(r.z);
    }
  }
}

TEST_CASE("invalid priors are rejected") {
  const auto t = table({{"a", 1}});
  const auto c = table({{"b", 1}});
  CHECK_THROWS_AS(log_odds(t, c, Prior{{"a", 1.0}}), ConfigError);
  CHECK_THROWS_AS(log_odds(t, c, Prior{{"a", 1.0}, {"b", 0.0}}), ConfigError);
}

TEST_CASE("planted vocabulary is recovered per dimension") {
  SynthConfig cfg;
  const auto corpus = synth_corpus(cfg, placeholder_inventory());
  std::vector<std::string> lexicon;
  for (const auto& l : cfg.rationale_lexicons) lexicon.insert(lexicon.end(), l.begin(), l.end());
  const Tokenizer tok(kLexiconGreedy, lexicon);
  const auto report = lexical_report(corpus.references, placeholder_inventory(), tok);
  for (std::size_t d = 0; d < 3; ++d) {
    const auto& kw = report.rows[d].keywords;
    REQUIRE(kw.size() == 5);
    for (const auto& w : cfg.rationale_lexicons[d]) {
      CAPTURE(w);
      const bool present = std::any_of(kw.begin(), kw.end(), [&](const WordLogOdds& k) {
        return k.word == w && k.z > 3.0;
      });
      CHECK(present);
    }
    CHECK(report.rows[d].length_mean == doctest::Approx(155.0).epsilon(0.02));
  }
  const auto table = render_lexical_table(report);
  CHECK(table.find("目标 (") != std::string::npos);
  CHECK(lexical_report_to_json(report)["tokenizer_id"] == "lexicon-greedy");
}

TEST_CASE("identical dimension texts give no keywords") {
  std::array<std::vector<TokenizedText>, 3> groups;
  const Tokenizer tok;
  for (auto& g : groups) {
    g = {tok("来访者与咨询师讨论了目标"), tok("咨询师表达了支持和理解")};
  }
  for (const auto& kw : dimension_keywords(groups)) CHECK(kw.empty());
}

TEST_CASE("dimension keyword preconditions") {
  std::array<std::vector<TokenizedText>, 3> groups;
  const Tokenizer tok;
  groups[0] = {tok("目标目标目标")};
  CHECK_THROWS_AS(dimension_keywords(groups), MissingDataError);
  groups[1] = {tok("方法")};
  const auto kw = dimension_keywords(groups);
  CHECK(kw[2].empty());
}

}  // TEST_SUITE
