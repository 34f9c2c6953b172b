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

// Single-reference text overlap metrics for generated rationales, and the
// per-dimension corpus report built on them.

#ifndef ALLIANCE_RATIONALE_METRICS_HPP_
#define ALLIANCE_RATIONALE_METRICS_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alliance/alliance_metrics.hpp"
#include "alliance/bertscore_client.hpp"
#include "alliance/domain.hpp"
#include "alliance/fold_splitter.hpp"
#include "alliance/json_io.hpp"
#include "alliance/tokenizer.hpp"

namespace alliance {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class BleuSmoothing {
  kNone,
  // A zero n-gram match count is replaced by epsilon.
  kAddEpsilon,
};

struct BleuOptions {
  int max_n = 4;
  BleuSmoothing smoothing = BleuSmoothing::kNone;
  double epsilon = 0.1;
};

// All three throw ConfigError when the token lists came from different
// tokenizers.
double bleu(const TokenizedText& candidate, const TokenizedText& reference,
            const BleuOptions& options = {});
Prf rouge1(const TokenizedText& candidate, const TokenizedText& reference);
Prf rougeL(const TokenizedText& candidate, const TokenizedText& reference);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

struct RationaleScore {
  double bleu = 0.0;
  double rouge1_f = 0.0;
  double rougeL_f = 0.0;
  std::optional<double> bertscore_f;
};

struct PairScore {
  std::string session_id;
  std::string item_id;
  Dimension dimension = Dimension::kGoal;
  int fold = -1;
  RationaleScore score;
};

struct RationaleDimensionReport {
  int n_pairs = 0;
  Summary bleu;
  Summary rouge1;
  Summary rougeL;
  Summary bertscore;
};

struct RationaleReport {
  std::string tokenizer_id;
  BleuOptions bleu_options;
  // "folds" when a fold plan grouped the pairs, else "pairs".
  std::string std_over = "pairs";
  int k = 0;
  std::array<RationaleDimensionReport, 3> dimensions;
  bool bertscore_available = false;
  std::string bertscore_model_tag;
  std::string bertscore_note;
  std::vector<PairScore> pairs;
  std::vector<std::string> warnings;
};

struct ScoreCorpusOptions {
  BleuOptions bleu;
  // When both are set, each pair is assigned the fold of its client and the
  // summaries are taken over per-fold means.
  const FoldPlan* plan = nullptr;
  const std::vector<Session>* sessions = nullptr;
  const BertScoreClient* bertscore = nullptr;
};

// Every prediction needs a reference for the same (session, item);
// MissingDataError lists the uncovered pairs.
RationaleReport score_corpus(const std::vector<PredictionRecord>& predictions,
                             const std::vector<RationaleRef>& references,
                             const WaiInventory& inv, const Tokenizer& tokenizer,
                             const ScoreCorpusOptions& options = {});

Json rationale_report_to_json(const RationaleReport& r, bool include_pairs = false);

// Metric rows by dimension columns, cells formatted as mean_{std}.
std::string render_rationale_table(const RationaleReport& r);

// Blank human-rating sheet: one row per pair with empty 1..5 slots for
// faithfulness, relevance and informativeness.
Json human_rubric_template(const std::vector<PredictionRecord>& predictions,
                           const WaiInventory& inv);

}  // namespace alliance

#endif  // ALLIANCE_RATIONALE_METRICS_HPP_
