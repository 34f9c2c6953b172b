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

// Seeded synthetic corpus shaped like the real counseling data: clients
// with several sessions each, negatively skewed 1..5 item ratings, template
// dialogue, optional strategy/reaction labels and one reference rationale
// per (session, item) with planted dimension vocabulary.

#ifndef ALLIANCE_SYNTH_HPP_
#define ALLIANCE_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "alliance/domain.hpp"

namespace alliance {

struct IntRange {
  int min = 0;
  int max = 0;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_clients = 80;
  IntRange sessions_per_client{5, 15};
  // Target per-dimension mean of client ratings (Goal, Task, Bond).
  std::array<double, 3> skew_target{3.89, 3.65, 4.07};
  // Words planted into reference rationales of each dimension.
  std::array<std::vector<std::string>, 3> rationale_lexicons{
      std::vector<std::string>{"目标", "努力", "探讨", "改善", "制定"},
      std::vector<std::string>{"方法", "意识", "新", "改变", "解决问题"},
      std::vector<std::string>{"支持", "关心", "表现", "感受", "理解"}};
  // Fraction of sessions whose utterances carry strategy/reaction labels.
  double annotate_fraction = 0.4;
  // Fraction of sessions that also carry counselor self-ratings.
  double counselor_rating_fraction = 0.9;
  int n_counselors = 12;
  IntRange turns{8, 24};
  // Reference rationale length in Unicode scalar values (mean, spread).
  double rationale_length_mean = 155.0;
  double rationale_length_sd = 13.0;
  // Fold count the corpus must support; n_clients below it is rejected.
  int fold_count = 5;
};

struct SynthCorpus {
  std::vector<Session> sessions;
  // Twelve per session, in session order then inventory order.
  std::vector<RationaleRef> references;
};

// Pure function of (cfg, inv). Throws ConfigError on infeasible settings.
SynthCorpus synth_corpus(const SynthConfig& cfg, const WaiInventory& inv);

// Number of Unicode scalar values in a UTF-8 string (invalid bytes count
// as one each).
std::size_t utf8_length(std::string_view s);

}  // namespace alliance

#endif  // ALLIANCE_SYNTH_HPP_
