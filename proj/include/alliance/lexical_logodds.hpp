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

// Weighted log-odds ratio with an informative Dirichlet prior (Monroe,
// Colaresi and Quinn 2008) for the words that set one dimension's
// rationales apart from the other two.

#ifndef ALLIANCE_LEXICAL_LOGODDS_HPP_
#define ALLIANCE_LEXICAL_LOGODDS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/json_io.hpp"
#include "alliance/tokenizer.hpp"

namespace alliance {

struct CountTable {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  std::string tokenizer_id;

  // Throws ConfigError when both tables are non-empty and were built with
  // different tokenizers.
  void add(const CountTable& other);
  std::int64_t count(const std::string& w) const;
};

// Throws ConfigError when the texts mix tokenizers.
CountTable count_unigrams(const std::vector<TokenizedText>& texts);

using Prior = std::map<std::string, double>;

// alpha_w = scale * pooled_w + offset.
Prior make_prior(const CountTable& pooled, double scale = 1.0, double offset = 0.0);

struct WordLogOdds {
  std::string word;
  double delta = 0.0;
  double variance = 0.0;
  double z = 0.0;
};

// One entry per word of target ∪ contrast, sorted by z descending with ties
// broken by word. Throws ConfigError when an observed word has no positive
// prior mass or the prior total leaves no room for the rest of the
// vocabulary.
std::vector<WordLogOdds> log_odds(const CountTable& target, const CountTable& contrast,
                                  const Prior& prior);

struct KeywordOptions {
  int top_k = 5;
  double z_threshold = 3.0;
  double prior_scale = 1.0;
};

// Per dimension, the top_k words with z > z_threshold against the pooled
// other dimensions. An empty group gets an empty list; fewer than two
// populated groups throw MissingDataError.
std::array<std::vector<WordLogOdds>, 3> dimension_keywords(
    const std::array<std::vector<TokenizedText>, 3>& groups,
    const KeywordOptions& options = {});

struct LexicalDimensionRow {
  int n_rationales = 0;
  double length_mean = 0.0;
  double length_std = 0.0;  // sample
  std::vector<WordLogOdds> keywords;
};

struct LexicalReport {
  std::string tokenizer_id;
  KeywordOptions options;
  std::array<LexicalDimensionRow, 3> rows;
};

// Groups reference rationales by item dimension, measures their length in
// Unicode scalar values and runs dimension_keywords.
LexicalReport lexical_report(const std::vector<RationaleRef>& rationales,
                             const WaiInventory& inv, const Tokenizer& tokenizer,
                             const KeywordOptions& options = {});

Json lexical_report_to_json(const LexicalReport& r);
// "Goal | 156.71_{13.66} | 目标 (55.32), 努力 (29.31), ..."
std::string render_lexical_table(const LexicalReport& r);

}  // namespace alliance

#endif  // ALLIANCE_LEXICAL_LOGODDS_HPP_
