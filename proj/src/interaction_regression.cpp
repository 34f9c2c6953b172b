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

#include "alliance/interaction_regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "alliance/student_t.hpp"

namespace alliance {
namespace {

// Column j is treated as dependent when its QR pivot falls below this
// fraction of the column's own norm.
constexpr double kRankTolerance = 1e-10;

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string_view mode_name(FeatureMode m) {
  return m == FeatureMode::kProportion ? "proportion" : "raw_count";
}

}  // namespace

DesignMatrix::DesignMatrix(std::vector<std::string> columns, std::size_t rows)
    : columns_(std::move(columns)), rows_(rows), values_(rows * columns_.size(), 0.0) {}

void DesignMatrix::add_row(const std::vector<double>& row) {
  if (row.size() != cols()) {
    throw CardinalityError("design row has " + std::to_string(row.size()) +
                           " values for " + std::to_string(cols()) + " columns");
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

std::string Pattern::label() const { return strategy + " - " + reaction; }

std::map<Pattern, int> count_patterns(const Session& s) {
  std::map<Pattern, int> counts;
  for (std::size_t i = 0; i + 1 < s.utterances.size(); ++i) {
    const auto& a = s.utterances[i];
    const auto& b = s.utterances[i + 1];
    if (a.speaker == Speaker::kCounselor && b.speaker == Speaker::kClient &&
        a.strategy && b.reaction) {
      ++counts[{*a.strategy, *b.reaction}];
    }
  }
  return counts;
}

std::vector<Pattern> observed_patterns(const std::vector<Session>& sessions) {
  std::set<Pattern> seen;
  for (const auto& s : sessions) {
    if (!s.annotated()) continue;
    for (const auto& [p, c] : count_patterns(s)) seen.insert(p);
  }
  return {seen.begin(), seen.end()};
}

Design build_design(const std::vector<Session>& sessions,
                    const std::vector<Pattern>& vocab, FeatureMode mode) {
  std::vector<std::string> columns{"(Intercept)"};
  std::set<std::string> labels;
  for (const auto& p : vocab) {
    if (!labels.insert(p.label()).second) {
      throw ConfigError("duplicate pattern '" + p.label() + "'");
    }
    columns.push_back(p.label());
  }
  Design out{DesignMatrix(columns, 0), {}, {}};
  int dropped = 0;
  for (const auto& s : sessions) {
    if (!s.annotated()) {
      ++dropped;
      continue;
    }
    const auto counts = count_patterns(s);
    const double pairs = s.utterances.size() > 1
                             ? static_cast<double>(s.utterances.size() - 1)
                             : 1.0;
    std::vector<double> row{1.0};
    for (const auto& p : vocab) {
      auto it = counts.find(p);
      const double c = it == counts.end() ? 0.0 : it->second;
      row.push_back(mode == FeatureMode::kProportion ? c / pairs : c);
    }
    out.x.add_row(row);
    out.session_ids.push_back(s.session_id);
  }
  if (dropped > 0) {
    out.warnings.push_back(std::to_string(dropped) +
                           " session(s) without full strategy/reaction labels excluded");
  }
  if (out.session_ids.empty()) {
    throw MissingDataError("no annotated sessions to build a design from");
  }
  return out;
}

RegressionFit ols_fit(const DesignMatrix& x, const std::vector<double>& y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) {
    throw CardinalityError("response has " + std::to_string(y.size()) +
                           " values for " + std::to_string(n) + " rows");
  }
  if (n <= p) {
    throw NumericalError("need more rows than columns for inference (n=" +
                         std::to_string(n) + ", p=" + std::to_string(p) + ")");
  }

  // Column-major working copy, reduced in place to R; qty accumulates Q^T y.
  std::vector<std::vector<double>> a(p, std::vector<double>(n));
  std::vector<double> col_norm(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      a[j][i] = x.at(i, j);
      col_norm[j] += a[j][i] * a[j][i];
    }
    col_norm[j] = std::sqrt(col_norm[j]);
  }
  std::vector<double> qty = y;

  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += a[j][i] * a[j][i];
    norm = std::sqrt(norm);
    if (!(norm > kRankTolerance * col_norm[j]) || col_norm[j] == 0.0) {
      throw NumericalError("singular design: column '" + x.columns()[j] +
                           "' is linearly dependent on earlier columns");
    }
    const double alpha = a[j][j] > 0.0 ? -norm : norm;
    std::vector<double> v(a[j].begin() + static_cast<std::ptrdiff_t>(j), a[j].end());
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double e : v) vnorm2 += e * e;
    if (vnorm2 > 0.0) {
      auto reflect = [&](std::vector<double>& col) {
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i - j] * col[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) col[i] -= f * v[i - j];
      };
      for (std::size_t k = j; k < p; ++k) reflect(a[k]);
      reflect(qty);
    }
  }
  auto r = [&](std::size_t i, std::size_t j) { return a[j][i]; };

  std::vector<double> beta(p, 0.0);
  for (std::size_t ii = p; ii-- > 0;) {
    double s = qty[ii];
    for (std::size_t k = ii + 1; k < p; ++k) s -= r(ii, k) * beta[k];
    beta[ii] = s / r(ii, ii);
  }

  // R^-1 (upper triangular); diag((X^T X)^-1) is the row sum of squares.
  std::vector<std::vector<double>> rinv(p, std::vector<double>(p, 0.0));
  for (std::size_t j = 0; j < p; ++j) {
    rinv[j][j] = 1.0 / r(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = 0.0;
      for (std::size_t k = ii + 1; k <= j; ++k) s += r(ii, k) * rinv[k][j];
      rinv[ii][j] = -s / r(ii, ii);
    }
  }

  RegressionFit fit;
  fit.n = n;
  fit.p = p;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < p; ++j) pred += x.at(i, j) * beta[j];
    fit.rss += (y[i] - pred) * (y[i] - pred);
    tss += (y[i] - y_mean) * (y[i] - y_mean);
  }
  const double dof = static_cast<double>(n - p);
  fit.residual_variance = fit.rss / dof;
  if (tss > 0.0) fit.r_squared = std::clamp(1.0 - fit.rss / tss, 0.0, 1.0);

  for (std::size_t j = 0; j < p; ++j) {
    double diag = 0.0;
    for (std::size_t k = j; k < p; ++k) diag += rinv[j][k] * rinv[j][k];
    Coefficient c;
    c.name = x.columns()[j];
    c.estimate = beta[j];
    c.std_error = std::sqrt(fit.residual_variance * diag);
    if (c.std_error > 0.0) {
      c.t = c.estimate / c.std_error;
      c.p = student_t_two_sided_p(c.t, dof);
    } else if (c.estimate != 0.0) {
      // Exact fit: the estimate carries no sampling error.
      c.t = std::copysign(std::numeric_limits<double>::infinity(), c.estimate);
      c.p = 0.0;
    }
    fit.coefficients.push_back(std::move(c));
  }
  return fit;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

InteractionReport interaction_report(const std::vector<Session>& sessions,
                                     const WaiInventory& inv,
                                     std::optional<std::vector<Pattern>> vocab,
                                     FeatureMode mode) {
  InteractionReport report;
  report.mode = mode;
  std::vector<Session> rated;
  for (const auto& s : sessions) {
    if (s.client_item_ratings) rated.push_back(s);
  }
  if (rated.size() != sessions.size()) {
    report.warnings.push_back(std::to_string(sessions.size() - rated.size()) +
                              " session(s) without client ratings excluded");
  }
  const auto patterns = vocab ? *vocab : observed_patterns(rated);
  Design design = build_design(rated, patterns, mode);
  report.warnings.insert(report.warnings.end(), design.warnings.begin(),
                         design.warnings.end());
  report.session_ids = design.session_ids;

  std::map<std::string, const Session*> by_id;
  for (const auto& s : rated) by_id[s.session_id] = &s;
  for (Dimension d : kDimensions) {
    std::vector<double> y;
    for (const auto& id : design.session_ids) {
      y.push_back(dimension_scores(*by_id[id]->client_item_ratings, inv)[index_of(d)].value());
    }
    report.fits[index_of(d)] = ols_fit(design.x, y);
  }
  return report;
}

Json interaction_report_to_json(const InteractionReport& r) {
  Json j;
  j["feature_mode"] = mode_name(r.mode);
  j["n_sessions"] = r.session_ids.size();
  Json fits;
  for (Dimension d : kDimensions) {
    const auto& f = r.fits[index_of(d)];
    Json coefs = Json::array();
    for (const auto& c : f.coefficients) {
      coefs.push_back({{"name", c.name},
                       {"estimate", c.estimate},
                       {"std_error", c.std_error},
                       {"t", finite_or_null(c.t)},
                       {"p", c.p},
                       {"stars", significance_stars(c.p)}});
    }
    fits[std::string(to_string(d))] = {
        {"n", f.n},
        {"p", f.p},
        {"rss", f.rss},
        {"residual_variance", f.residual_variance},
        {"r_squared", f.r_squared ? Json(*f.r_squared) : Json(nullptr)},
        {"coefficients", std::move(coefs)}};
  }
  j["fits"] = std::move(fits);
  j["warnings"] = r.warnings;
  return j;
}

std::string render_interaction_table(const InteractionReport& r) {
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-26s | %-12s | %-12s | %-12s\n", "", "Goal", "Task",
                "Bond");
  os << buf;
  const auto& names = r.fits[0].coefficients;
  auto row = [&](std::size_t j) {
    std::snprintf(buf, sizeof buf, "%-26s", names[j].name.c_str());
    os << buf;
    for (const auto& f : r.fits) {
      const auto& c = f.coefficients[j];
      std::snprintf(buf, sizeof buf, "%.2f%s", c.estimate, significance_stars(c.p).c_str());
      std::string cell = buf;
      std::snprintf(buf, sizeof buf, " | %-12s", cell.c_str());
      os << buf;
    }
    os << '\n';
  };
  for (std::size_t j = 1; j < names.size(); ++j) row(j);
  if (!names.empty()) row(0);
  os << "n = " << r.session_ids.size() << " sessions; features: " << mode_name(r.mode)
     << "; *** p<0.001, ** p<0.01, * p<0.05\n";
  return os.str();
}

}  // namespace alliance
