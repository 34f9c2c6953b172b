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

// Item-to-dimension aggregation and agreement metrics against client
// self-reports. Correlations are computed per fold over session-level
// dimension scores, then summarised as mean and sample standard deviation
// across folds.

#ifndef ALLIANCE_ALLIANCE_METRICS_HPP_
#define ALLIANCE_ALLIANCE_METRICS_HPP_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/fold_splitter.hpp"
#include "alliance/json_io.hpp"

namespace alliance {

// Throws CardinalityError on a missing, duplicate or unregistered item.
DimensionScores aggregate_dimension(std::span<const PredictionRecord> records,
                                    const WaiInventory& inv);

// nullopt marks an undefined correlation (zero variance on either side).
// Length mismatch or fewer than two points throw CardinalityError.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);
// Throws CardinalityError on length mismatch or empty input.
double mse(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

struct SessionDimensionScores {
  std::string session_id;
  std::string client_id;
  std::string counselor_id;
  DimensionScores predicted;
  DimensionScores client;
};

// Joins predictions to sessions. Every listed session must have all 12
// predictions (MissingDataError names the absent "session/item" pairs) and
// client ratings.
std::vector<SessionDimensionScores> score_sessions(
    const std::vector<Session>& sessions,
    const std::vector<PredictionRecord>& predictions, const WaiInventory& inv);

struct MetricSet {
  std::optional<double> pearson;
  std::optional<double> spearman;
  double mse = 0.0;
  int n = 0;
};

using DimensionMetrics = std::array<MetricSet, 3>;

DimensionMetrics compute_metrics(const std::vector<SessionDimensionScores>& rows);

// Mean and sample standard deviation over the defined values only.
struct Summary {
  std::optional<double> mean;
  std::optional<double> std;
  int n_used = 0;
  int n_skipped = 0;
};

Summary summarize(const std::vector<std::optional<double>>& values);

struct DimensionSummary {
  Summary pearson;
  Summary spearman;
  Summary mse;
};

struct EvalReport {
  std::string model_id;
  int k = 0;
  std::vector<DimensionMetrics> folds;
  std::array<DimensionSummary, 3> aggregate;
  // Whole-set agreement of counselor self-ratings, when requested.
  std::optional<DimensionMetrics> counselor_baseline;
  std::string std_kind = "sample";
};

// Predictions must cover every (eval session, item) pair of every fold.
EvalReport evaluate_folds(const FoldPlan& plan,
                          const std::vector<PredictionRecord>& predictions,
                          const std::vector<Session>& sessions,
                          const WaiInventory& inv);

// Counselor self-ratings against client ratings over all sessions carrying
// both; nullopt when no session has counselor ratings.
std::optional<DimensionMetrics> evaluate_counselor_ratings(
    const std::vector<Session>& sessions, const WaiInventory& inv);

Json eval_report_to_json(const EvalReport& r);
EvalReport eval_report_from_json(const Json& j);

// "0.52_{0.06}": mean to two decimals, standard deviation subscripted.
std::string format_mean_std(const Summary& s);

// Table with one row per report: Pearson, Spearman and MSE per dimension.
std::string render_comparison_table(const std::vector<EvalReport>& reports);

struct CohortGroup {
  std::string group;
  int n_sessions = 0;
  std::array<double, 3> mean{};
};

struct CohortProfile {
  // Groups with at least min_sessions sessions, most active first.
  std::vector<CohortGroup> groups;
  // Over every input session, listed or not.
  std::array<double, 3> overall_mean{};
  int n_sessions = 0;
};

struct GroupedScores {
  std::string group;
  std::array<double, 3> scores{};
};

CohortProfile cohort_profile(const std::vector<GroupedScores>& rows,
                             int min_sessions);
Json cohort_profile_to_json(const CohortProfile& p);

}  // namespace alliance

#endif  // ALLIANCE_ALLIANCE_METRICS_HPP_
