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

// Session-level OLS of alliance scores on counselor-strategy ->
// client-reaction turn patterns.

#ifndef ALLIANCE_INTERACTION_REGRESSION_HPP_
#define ALLIANCE_INTERACTION_REGRESSION_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/json_io.hpp"

namespace alliance {

// Row-major dense matrix with labelled columns.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  DesignMatrix(std::vector<std::string> columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  // Appends a row; throws CardinalityError on a width mismatch.
  void add_row(const std::vector<double>& row);

 private:
  std::vector<std::string> columns_;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

struct Pattern {
  std::string strategy;
  std::string reaction;

  // "Supporting - Negative"
  std::string label() const;
  bool operator==(const Pattern&) const = default;
  auto operator<=>(const Pattern&) const = default;
};

enum class FeatureMode {
  // Pattern count over the number of adjacent utterance pairs.
  kProportion,
  kRawCount,
};

// Adjacent (counselor strategy s, next client reaction r) pairs.
std::map<Pattern, int> count_patterns(const Session& s);

// Every pattern seen in the annotated sessions, sorted.
std::vector<Pattern> observed_patterns(const std::vector<Session>& sessions);

struct Design {
  DesignMatrix x;  // intercept first, then one column per pattern
  std::vector<std::string> session_ids;
  std::vector<std::string> warnings;
};

// Only sessions whose every utterance is labelled contribute rows; others
// are dropped with a warning. Throws MissingDataError when none remain.
Design build_design(const std::vector<Session>& sessions,
                    const std::vector<Pattern>& vocab,
                    FeatureMode mode = FeatureMode::kProportion);

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double t = 0.0;
  double p = 1.0;
};

struct RegressionFit {
  std::vector<Coefficient> coefficients;
  std::size_t n = 0;
  std::size_t p = 0;
  double rss = 0.0;
  double residual_variance = 0.0;
  // Undefined when the response is constant.
  std::optional<double> r_squared;
};

// Householder QR least squares. Throws NumericalError when a column is
// (numerically) a combination of earlier ones or n <= p, and
// CardinalityError when |y| differs from the row count.
RegressionFit ols_fit(const DesignMatrix& x, const std::vector<double>& y);

// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, else "".
std::string significance_stars(double p);

struct InteractionReport {
  FeatureMode mode = FeatureMode::kProportion;
  std::vector<std::string> session_ids;
  std::array<RegressionFit, 3> fits;
  std::vector<std::string> warnings;
};

// Regresses each dimension's client score on the pattern features. With no
// vocab, every pattern observed in the data is used. Sessions without
// client ratings are dropped with a warning.
InteractionReport interaction_report(const std::vector<Session>& sessions,
                                     const WaiInventory& inv,
                                     std::optional<std::vector<Pattern>> vocab = std::nullopt,
                                     FeatureMode mode = FeatureMode::kProportion);

Json interaction_report_to_json(const InteractionReport& r);
// Pattern rows by dimension columns, estimates with stars; the intercept
// row is listed last.
std::string render_interaction_table(const InteractionReport& r);

}  // namespace alliance

#endif  // ALLIANCE_INTERACTION_REGRESSION_HPP_
