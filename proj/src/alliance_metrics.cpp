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

#include "alliance/alliance_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace alliance {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y,
                std::size_t min_len) {
  if (x.size() != y.size()) {
    throw CardinalityError("length mismatch: " + std::to_string(x.size()) +
                           " vs " + std::to_string(y.size()));
  }
  if (x.size() < min_len) {
    throw CardinalityError("need at least " + std::to_string(min_len) +
                           " values, got " + std::to_string(x.size()));
  }
}

bool constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

std::optional<double> json_opt(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

Json opt_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json metrics_to_json(const DimensionMetrics& m) {
  Json j;
  for (Dimension d : kDimensions) {
    const auto& s = m[index_of(d)];
    j[std::string(to_string(d))] = {{"pearson", opt_json(s.pearson)},
                                    {"spearman", opt_json(s.spearman)},
                                    {"mse", s.mse},
                                    {"n", s.n}};
  }
  return j;
}

DimensionMetrics metrics_from_json(const Json& j) {
  DimensionMetrics m;
  for (Dimension d : kDimensions) {
    const Json& s = require_field(j, to_string(d));
    m[index_of(d)] = {json_opt(s, "pearson"), json_opt(s, "spearman"),
                      require_number(s, "mse"), static_cast<int>(require_int(s, "n"))};
  }
  return m;
}

Json summary_to_json(const Summary& s) {
  return {{"mean", opt_json(s.mean)},
          {"std", opt_json(s.std)},
          {"n_used", s.n_used},
          {"n_skipped", s.n_skipped}};
}

Summary summary_from_json(const Json& j) {
  Summary s;
  s.mean = json_opt(j, "mean");
  s.std = json_opt(j, "std");
  s.n_used = static_cast<int>(require_int(j, "n_used"));
  s.n_skipped = static_cast<int>(require_int(j, "n_skipped"));
  return s;
}

std::string format_plain(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

}  // namespace

DimensionScores aggregate_dimension(std::span<const PredictionRecord> records,
                                    const WaiInventory& inv) {
  if (records.size() != kInventorySize) {
    throw CardinalityError("expected 12 records, got " +
                           std::to_string(records.size()));
  }
  ItemRatings ratings;
  for (const auto& r : records) {
    if (!inv.contains(r.item_id)) {
      throw CardinalityError("record for unregistered item '" + r.item_id + "'");
    }
    if (!ratings.emplace(r.item_id, r.score).second) {
      throw CardinalityError("duplicate record for item '" + r.item_id + "'");
    }
  }
  return dimension_scores(ratings, inv);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  if (constant(x) || constant(y)) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double mse(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

std::vector<SessionDimensionScores> score_sessions(
    const std::vector<Session>& sessions,
    const std::vector<PredictionRecord>& predictions, const WaiInventory& inv) {
  std::set<std::string> wanted;
  for (const auto& s : sessions) wanted.insert(s.session_id);
  std::map<std::string, std::vector<PredictionRecord>> by_session;
  for (const auto& p : predictions) {
    if (wanted.contains(p.session_id)) by_session[p.session_id].push_back(p);
  }
  std::vector<std::string> missing;
  std::vector<SessionDimensionScores> rows;
  for (const auto& s : sessions) {
    const auto& recs = by_session[s.session_id];
    std::set<std::string> have;
    for (const auto& r : recs) {
      if (!have.insert(r.item_id).second) {
        throw CardinalityError("duplicate prediction for " + s.session_id + "/" +
                               r.item_id);
      }
    }
    bool complete = true;
    for (const auto& item : inv.items()) {
      if (!have.contains(item.item_id)) {
        missing.push_back(s.session_id + "/" + item.item_id);
        complete = false;
      }
    }
    if (!complete) continue;
    if (!s.client_item_ratings) {
      throw MissingDataError("session " + s.session_id + " has no client ratings",
                             {s.session_id});
    }
    rows.push_back({s.session_id, s.client_id, s.counselor_id,
                    aggregate_dimension(recs, inv),
                    dimension_scores(*s.client_item_ratings, inv)});
  }
  if (!missing.empty()) {
    throw MissingDataError(std::to_string(missing.size()) +
                               " (session, item) prediction(s) missing, first: " +
                               missing.front(),
                           std::move(missing));
  }
  return rows;
}

DimensionMetrics compute_metrics(const std::vector<SessionDimensionScores>& rows) {
  DimensionMetrics out;
  for (Dimension d : kDimensions) {
    std::vector<double> pred, truth;
    for (const auto& r : rows) {
      pred.push_back(r.predicted[index_of(d)].value());
      truth.push_back(r.client[index_of(d)].value());
    }
    MetricSet& m = out[index_of(d)];
    m.n = static_cast<int>(rows.size());
    if (rows.empty()) continue;
    m.mse = mse(pred, truth);
    if (rows.size() >= 2) {
      m.pearson = pearson(pred, truth);
      m.spearman = spearman(pred, truth);
    }
  }
  return out;
}

Summary summarize(const std::vector<std::optional<double>>& values) {
  Summary s;
  std::vector<double> used;
  for (const auto& v : values) {
    if (v) {
      used.push_back(*v);
    } else {
      ++s.n_skipped;
    }
  }
  s.n_used = static_cast<int>(used.size());
  if (used.empty()) return s;
  const double mean =
      std::accumulate(used.begin(), used.end(), 0.0) / static_cast<double>(used.size());
  s.mean = mean;
  if (used.size() >= 2) {
    double ss = 0.0;
    for (double v : used) ss += (v - mean) * (v - mean);
    s.std = std::sqrt(ss / static_cast<double>(used.size() - 1));
  }
  return s;
}

EvalReport evaluate_folds(const FoldPlan& plan,
                          const std::vector<PredictionRecord>& predictions,
                          const std::vector<Session>& sessions,
                          const WaiInventory& inv) {
  EvalReport report;
  report.k = plan.k;
  if (!predictions.empty()) report.model_id = predictions.front().model_id;

  std::vector<std::string> missing;
  for (int f = 0; f < plan.k; ++f) {
    const auto view = fold_view(plan, sessions, f);
    try {
      report.folds.push_back(compute_metrics(score_sessions(view.eval, predictions, inv)));
    } catch (const MissingDataError& e) {
      missing.insert(missing.end(), e.missing().begin(), e.missing().end());
    }
  }
  if (!missing.empty()) {
    throw MissingDataError(std::to_string(missing.size()) +
                               " (session, item) prediction(s) missing, first: " +
                               missing.front(),
                           std::move(missing));
  }
  for (Dimension d : kDimensions) {
    std::vector<std::optional<double>> p, s, m;
    for (const auto& fold : report.folds) {
      const auto& fm = fold[index_of(d)];
      p.push_back(fm.pearson);
      s.push_back(fm.spearman);
      m.push_back(fm.n > 0 ? std::optional<double>(fm.mse) : std::nullopt);
    }
    report.aggregate[index_of(d)] = {summarize(p), summarize(s), summarize(m)};
  }
  return report;
}

std::optional<DimensionMetrics> evaluate_counselor_ratings(
    const std::vector<Session>& sessions, const WaiInventory& inv) {
  std::vector<SessionDimensionScores> rows;
  for (const auto& s : sessions) {
    if (!s.client_item_ratings || !s.counselor_item_ratings) continue;
    rows.push_back({s.session_id, s.client_id, s.counselor_id,
                    dimension_scores(*s.counselor_item_ratings, inv),
                    dimension_scores(*s.client_item_ratings, inv)});
  }
  if (rows.empty()) return std::nullopt;
  return compute_metrics(rows);
}

Json eval_report_to_json(const EvalReport& r) {
  Json j;
  j["model_id"] = r.model_id;
  j["k"] = r.k;
  j["std_kind"] = r.std_kind;
  Json folds = Json::array();
  for (const auto& f : r.folds) folds.push_back(metrics_to_json(f));
  j["folds"] = std::move(folds);
  Json agg;
  for (Dimension d : kDimensions) {
    const auto& a = r.aggregate[index_of(d)];
    agg[std::string(to_string(d))] = {{"pearson", summary_to_json(a.pearson)},
                                      {"spearman", summary_to_json(a.spearman)},
                                      {"mse", summary_to_json(a.mse)}};
  }
  j["aggregate"] = std::move(agg);
  if (r.counselor_baseline) {
    j["counselor_baseline"] = metrics_to_json(*r.counselor_baseline);
  }
  return j;
}

EvalReport eval_report_from_json(const Json& j) {
  EvalReport r;
  r.model_id = require_string(j, "model_id");
  r.k = static_cast<int>(require_int(j, "k"));
  if (j.contains("std_kind")) r.std_kind = require_string(j, "std_kind");
  for (const auto& f : require_field(j, "folds")) r.folds.push_back(metrics_from_json(f));
  const Json& agg = require_field(j, "aggregate");
  for (Dimension d : kDimensions) {
    const Json& a = require_field(agg, to_string(d));
    r.aggregate[index_of(d)] = {summary_from_json(require_field(a, "pearson")),
                                summary_from_json(require_field(a, "spearman")),
                                summary_from_json(require_field(a, "mse"))};
  }
  if (j.contains("counselor_baseline")) {
    r.counselor_baseline = metrics_from_json(j.at("counselor_baseline"));
  }
  return r;
}

std::string format_mean_std(const Summary& s) {
  if (!s.mean) return "n/a";
  char buf[48];
  if (s.std) {
    std::snprintf(buf, sizeof buf, "%.2f_{%.2f}", *s.mean, *s.std);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", *s.mean);
  }
  return buf;
}

std::string render_comparison_table(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-24s", "Model");
  os << buf;
  for (Dimension d : kDimensions) {
    for (const char* m : {"Pearson", "Spearman", "MSE"}) {
      std::snprintf(buf, sizeof buf, " | %-4s %-9s", std::string(to_string(d)).c_str(), m);
      os << buf;
    }
  }
  os << '\n';
  auto cell = [&](const std::string& s) {
    std::snprintf(buf, sizeof buf, " | %-14s", s.c_str());
    os << buf;
  };
  bool baseline_done = false;
  for (const auto& r : reports) {
    if (r.counselor_baseline && !baseline_done) {
      baseline_done = true;
      std::snprintf(buf, sizeof buf, "%-24s", "Human Counselor");
      os << buf;
      for (Dimension d : kDimensions) {
        const auto& m = (*r.counselor_baseline)[index_of(d)];
        cell(format_plain(m.pearson));
        cell(format_plain(m.spearman));
        cell(format_plain(m.mse));
      }
      os << "  (n=" << (*r.counselor_baseline)[0].n << ")\n";
    }
  }
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-24s", r.model_id.substr(0, 24).c_str());
    os << buf;
    for (Dimension d : kDimensions) {
      const auto& a = r.aggregate[index_of(d)];
      cell(format_mean_std(a.pearson));
      cell(format_mean_std(a.spearman));
      cell(format_mean_std(a.mse));
    }
    os << '\n';
  }
  os << "mean_{std} over " << (reports.empty() ? 0 : reports.front().k)
     << " folds; std is the sample (n-1) standard deviation\n";
  return os.str();
}

CohortProfile cohort_profile(const std::vector<GroupedScores>& rows,
                             int min_sessions) {
  CohortProfile p;
  std::map<std::string, CohortGroup> groups;
  for (const auto& r : rows) {
    auto& g = groups[r.group];
    g.group = r.group;
    ++g.n_sessions;
    for (std::size_t d = 0; d < 3; ++d) {
      g.mean[d] += r.scores[d];
      p.overall_mean[d] += r.scores[d];
    }
  }
  p.n_sessions = static_cast<int>(rows.size());
  if (p.n_sessions > 0) {
    for (auto& m : p.overall_mean) m /= p.n_sessions;
  }
  for (auto& [name, g] : groups) {
    for (auto& m : g.mean) m /= g.n_sessions;
    if (g.n_sessions >= min_sessions) p.groups.push_back(g);
  }
  std::stable_sort(p.groups.begin(), p.groups.end(),
                   [](const CohortGroup& a, const CohortGroup& b) {
                     return a.n_sessions > b.n_sessions;
                   });
  return p;
}

Json cohort_profile_to_json(const CohortProfile& p) {
  auto dims = [](const std::array<double, 3>& v) {
    Json j;
    for (Dimension d : kDimensions) j[std::string(to_string(d))] = v[index_of(d)];
    return j;
  };
  Json j;
  j["n_sessions"] = p.n_sessions;
  j["overall_mean"] = dims(p.overall_mean);
  Json groups = Json::array();
  for (const auto& g : p.groups) {
    groups.push_back({{"group", g.group}, {"n_sessions", g.n_sessions}, {"mean", dims(g.mean)}});
  }
  j["groups"] = std::move(groups);
  return j;
}

}  // namespace alliance
