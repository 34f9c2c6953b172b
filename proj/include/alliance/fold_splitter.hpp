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

// Client-grouped, score-stratified k-fold assignment.
//
// Clients are placed one at a time, largest first, into the fold that
// minimises
//   sum over dimensions of (n_f / N) * |fold mean - global mean|
//   + size_penalty * |n_f - N/k| / (N/k)
// summed over folds, where n_f counts sessions. Each of `candidate_pool`
// greedy passes uses its own seeded client order and tie breaks; the plan
// with the smallest maximum fold-mean deviation wins, earliest pass first
// on ties, so a larger pool never yields a worse plan.

#ifndef ALLIANCE_FOLD_SPLITTER_HPP_
#define ALLIANCE_FOLD_SPLITTER_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/json_io.hpp"

namespace alliance {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1); 0 when n < 2

  bool operator==(const MeanStd&) const = default;
};

struct FoldDiagnostics {
  int n_clients = 0;
  int n_sessions = 0;
  std::array<MeanStd, 3> dimension;  // client dimension scores

  bool operator==(const FoldDiagnostics&) const = default;
};

struct FoldPlan {
  int k = 5;
  std::uint64_t seed = 0;
  std::map<std::string, int> assignment;  // client_id -> fold
  std::vector<FoldDiagnostics> diagnostics;
  FoldDiagnostics total;
  // max over folds and dimensions of |fold mean - global mean|
  double max_deviation = 0.0;
  double epsilon = 0.35;

  bool within_bound() const { return max_deviation <= epsilon; }
  int fold_of(const std::string& client_id) const;
};

struct SplitOptions {
  double epsilon = 0.35;
  int candidate_pool = 16;
  double size_penalty = 1.0;
};

// Throws InfeasibleError with fewer distinct clients than k, and
// MissingDataError when a session has no client ratings.
FoldPlan split(const std::vector<Session>& sessions, const WaiInventory& inv,
               int k, std::uint64_t seed, const SplitOptions& opts = {});

// Recomputes the per-fold statistics for an assignment.
std::vector<FoldDiagnostics> compute_diagnostics(
    const std::vector<Session>& sessions, const WaiInventory& inv,
    const std::map<std::string, int>& assignment, int k);

struct FoldView {
  std::vector<Session> train;
  std::vector<Session> eval;
};

// Sessions keep their input order in both halves. Throws LookupError when
// fold_index is out of range or a session's client is not in the plan.
FoldView fold_view(const FoldPlan& plan, const std::vector<Session>& sessions,
                   int fold_index);

Json fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const Json& j);

// Per-fold clients, sessions and "mean_std" per dimension, plus a total row.
std::string render_fold_table(const FoldPlan& plan);

}  // namespace alliance

#endif  // ALLIANCE_FOLD_SPLITTER_HPP_
