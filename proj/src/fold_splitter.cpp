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

#include "alliance/fold_splitter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rng.hpp"

namespace alliance {
namespace {

struct ClientStats {
  std::string client_id;
  int n_sessions = 0;
  std::array<double, 3> sum{};  // of session dimension scores
};

struct FoldState {
  int n = 0;
  std::array<double, 3> sum{};
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double fold_cost(const FoldState& f, const std::array<double, 3>& global,
                 double total, double ideal, double size_penalty) {
  double cost = size_penalty * std::abs(f.n - ideal) / ideal;
  if (f.n == 0) return cost;
  for (std::size_t d = 0; d < 3; ++d) {
    cost += (f.n / total) * std::abs(f.sum[d] / f.n - global[d]);
  }
  return cost;
}

double max_deviation_of(const std::vector<FoldState>& folds,
                        const std::array<double, 3>& global) {
  double worst = 0.0;
  for (const auto& f : folds) {
    if (f.n == 0) continue;
    for (std::size_t d = 0; d < 3; ++d) {
      worst = std::max(worst, std::abs(f.sum[d] / f.n - global[d]));
    }
  }
  return worst;
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return out;
}

FoldDiagnostics diagnostics_for(const std::vector<const Session*>& members,
                                const WaiInventory& inv) {
  FoldDiagnostics diag;
  diag.n_sessions = static_cast<int>(members.size());
  std::vector<std::string> clients;
  std::array<std::vector<double>, 3> values;
  for (const Session* s : members) {
    clients.push_back(s->client_id);
    const auto scores = dimension_scores(*s->client_item_ratings, inv);
    for (std::size_t d = 0; d < 3; ++d) values[d].push_back(scores[d].value());
  }
  std::sort(clients.begin(), clients.end());
  diag.n_clients = static_cast<int>(
      std::unique(clients.begin(), clients.end()) - clients.begin());
  for (std::size_t d = 0; d < 3; ++d) diag.dimension[d] = mean_std(values[d]);
  return diag;
}

std::string fmt_mean_std(const MeanStd& m) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f_{%.2f}", m.mean, m.std);
  return buf;
}

Json diagnostics_to_json(const FoldDiagnostics& d) {
  Json j;
  j["n_clients"] = d.n_clients;
  j["n_sessions"] = d.n_sessions;
  for (Dimension dim : kDimensions) {
    j[std::string(to_string(dim))] = {{"mean", d.dimension[index_of(dim)].mean},
                                      {"std", d.dimension[index_of(dim)].std}};
  }
  return j;
}

FoldDiagnostics diagnostics_from_json(const Json& j) {
  FoldDiagnostics d;
  d.n_clients = static_cast<int>(require_int(j, "n_clients"));
  d.n_sessions = static_cast<int>(require_int(j, "n_sessions"));
  for (Dimension dim : kDimensions) {
    const Json& m = require_field(j, to_string(dim));
    d.dimension[index_of(dim)] = {require_number(m, "mean"),
                                  require_number(m, "std")};
  }
  return d;
}

}  // namespace

int FoldPlan::fold_of(const std::string& client_id) const {
  auto it = assignment.find(client_id);
  if (it == assignment.end()) {
    throw LookupError("client '" + client_id + "' is not in the fold plan");
  }
  return it->second;
}

std::vector<FoldDiagnostics> compute_diagnostics(
    const std::vector<Session>& sessions, const WaiInventory& inv,
    const std::map<std::string, int>& assignment, int k) {
  std::vector<std::vector<const Session*>> members(static_cast<std::size_t>(k));
  for (const auto& s : sessions) {
    auto it = assignment.find(s.client_id);
    if (it == assignment.end()) {
      throw LookupError("client '" + s.client_id + "' is not in the fold plan");
    }
    members.at(static_cast<std::size_t>(it->second)).push_back(&s);
  }
  std::vector<FoldDiagnostics> out;
  for (const auto& m : members) out.push_back(diagnostics_for(m, inv));
  return out;
}

FoldPlan split(const std::vector<Session>& sessions, const WaiInventory& inv,
               int k, std::uint64_t seed, const SplitOptions& opts) {
  if (k < 1) throw ConfigError("fold count must be >= 1");
  if (opts.candidate_pool < 1) throw ConfigError("candidate_pool must be >= 1");

  std::map<std::string, ClientStats> by_client;
  std::array<double, 3> global{};
  std::vector<std::string> unrated;
  for (const auto& s : sessions) {
    if (!s.client_item_ratings) {
      unrated.push_back(s.session_id);
      continue;
    }
    auto& c = by_client[s.client_id];
    c.client_id = s.client_id;
    ++c.n_sessions;
    const auto scores = dimension_scores(*s.client_item_ratings, inv);
    for (std::size_t d = 0; d < 3; ++d) {
      c.sum[d] += scores[d].value();
      global[d] += scores[d].value();
    }
  }
  if (!unrated.empty()) {
    throw MissingDataError("sessions without client ratings cannot be split",
                           unrated);
  }
  if (static_cast<int>(by_client.size()) < k) {
    throw InfeasibleError("need at least " + std::to_string(k) +
                          " distinct clients, got " +
                          std::to_string(by_client.size()));
  }
  const double total = static_cast<double>(sessions.size());
  for (auto& g : global) g /= total;
  const double ideal = total / k;

  std::vector<ClientStats> base_order;
  for (auto& [id, c] : by_client) base_order.push_back(c);
  std::stable_sort(base_order.begin(), base_order.end(),
                   [](const ClientStats& a, const ClientStats& b) {
                     return a.n_sessions > b.n_sessions;
                   });

  std::map<std::string, int> best_assignment;
  double best_dev = std::numeric_limits<double>::infinity();

  for (int cand = 0; cand < opts.candidate_pool; ++cand) {
    detail::Rng rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(cand))));
    // Seeded shuffle inside each block of equal session counts.
    std::vector<ClientStats> order = base_order;
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && order[j].n_sessions == order[i].n_sessions) ++j;
      std::vector<ClientStats> block(order.begin() + static_cast<long>(i),
                                     order.begin() + static_cast<long>(j));
      rng.shuffle(block);
      std::copy(block.begin(), block.end(), order.begin() + static_cast<long>(i));
      i = j;
    }

    std::vector<FoldState> folds(static_cast<std::size_t>(k));
    std::map<std::string, int> assignment;
    int empty_folds = k;
    for (const auto& c : order) {
      double best_delta = std::numeric_limits<double>::infinity();
      std::vector<int> tied;
      for (int f = 0; f < k; ++f) {
        const auto& cur = folds[static_cast<std::size_t>(f)];
        // Seed every fold before stacking clients.
        if (empty_folds > 0 && cur.n != 0) continue;
        FoldState next = cur;
        next.n += c.n_sessions;
        for (std::size_t d = 0; d < 3; ++d) next.sum[d] += c.sum[d];
        const double delta =
            fold_cost(next, global, total, ideal, opts.size_penalty) -
            fold_cost(cur, global, total, ideal, opts.size_penalty);
        if (delta < best_delta - 1e-12) {
          best_delta = delta;
          tied.assign(1, f);
        } else if (std::abs(delta - best_delta) <= 1e-12) {
          tied.push_back(f);
        }
      }
      const int chosen = tied[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(tied.size()) - 1))];
      auto& fold = folds[static_cast<std::size_t>(chosen)];
      if (fold.n == 0) --empty_folds;
      fold.n += c.n_sessions;
      for (std::size_t d = 0; d < 3; ++d) fold.sum[d] += c.sum[d];
      assignment[c.client_id] = chosen;
    }
    const double dev = max_deviation_of(folds, global);
    if (dev < best_dev) {
      best_dev = dev;
      best_assignment = std::move(assignment);
    }
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.epsilon = opts.epsilon;
  plan.assignment = std::move(best_assignment);
  plan.diagnostics = compute_diagnostics(sessions, inv, plan.assignment, k);
  std::vector<const Session*> all;
  for (const auto& s : sessions) all.push_back(&s);
  plan.total = diagnostics_for(all, inv);
  plan.max_deviation = best_dev;
  return plan;
}

FoldView fold_view(const FoldPlan& plan, const std::vector<Session>& sessions,
                   int fold_index) {
  if (fold_index < 0 || fold_index >= plan.k) {
    throw LookupError("fold index " + std::to_string(fold_index) +
                      " out of range [0, " + std::to_string(plan.k) + ")");
  }
  FoldView view;
  for (const auto& s : sessions) {
    (plan.fold_of(s.client_id) == fold_index ? view.eval : view.train)
        .push_back(s);
  }
  return view;
}

Json fold_plan_to_json(const FoldPlan& plan) {
  Json j;
  j["k"] = plan.k;
  j["seed"] = plan.seed;
  j["epsilon"] = plan.epsilon;
  j["max_deviation"] = plan.max_deviation;
  Json a = Json::object();
  for (const auto& [c, f] : plan.assignment) a[c] = f;
  j["assignment"] = std::move(a);
  Json diags = Json::array();
  for (std::size_t f = 0; f < plan.diagnostics.size(); ++f) {
    Json d = diagnostics_to_json(plan.diagnostics[f]);
    d["fold"] = f;
    diags.push_back(std::move(d));
  }
  j["diagnostics"] = std::move(diags);
  j["total"] = diagnostics_to_json(plan.total);
  return j;
}

FoldPlan fold_plan_from_json(const Json& j) {
  FoldPlan plan;
  plan.k = static_cast<int>(require_int(j, "k"));
  const Json& seed = require_field(j, "seed");
  if (!seed.is_number_integer()) throw ParseError("\"seed\" must be an integer");
  plan.seed = seed.get<std::uint64_t>();
  if (j.contains("epsilon")) plan.epsilon = require_number(j, "epsilon");
  if (j.contains("max_deviation")) {
    plan.max_deviation = require_number(j, "max_deviation");
  }
  const Json& a = require_field(j, "assignment");
  if (!a.is_object()) throw ParseError("\"assignment\" must be an object");
  for (const auto& [c, f] : a.items()) {
    if (!f.is_number_integer()) throw ParseError("fold index must be an integer");
    const int fold = f.get<int>();
    if (fold < 0 || fold >= plan.k) {
      throw ParseError("client '" + c + "' assigned to out-of-range fold");
    }
    plan.assignment[c] = fold;
  }
  if (j.contains("diagnostics")) {
    for (const auto& d : j.at("diagnostics")) {
      plan.diagnostics.push_back(diagnostics_from_json(d));
    }
  }
  if (j.contains("total")) plan.total = diagnostics_from_json(j.at("total"));
  return plan;
}

std::string render_fold_table(const FoldPlan& plan) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %8s %9s  %-12s %-12s %-12s\n", "Fold",
                "#Client", "#Session", "Goal", "Task", "Bond");
  os << buf;
  auto row = [&](const std::string& label, const FoldDiagnostics& d) {
    std::snprintf(buf, sizeof buf, "%-6s %8d %9d  %-12s %-12s %-12s\n",
                  label.c_str(), d.n_clients, d.n_sessions,
                  fmt_mean_std(d.dimension[0]).c_str(),
                  fmt_mean_std(d.dimension[1]).c_str(),
                  fmt_mean_std(d.dimension[2]).c_str());
    os << buf;
  };
  for (std::size_t f = 0; f < plan.diagnostics.size(); ++f) {
    row(std::to_string(f + 1), plan.diagnostics[f]);
  }
  row("Total", plan.total);
  std::snprintf(buf, sizeof buf, "max fold-mean deviation %.4f (bound %.2f)\n",
                plan.max_deviation, plan.epsilon);
  os << buf;
  return os.str();
}

}  // namespace alliance
