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

#include "alliance/rationale_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string_view>

namespace alliance {
namespace {

using NgramCounts = std::map<std::vector<std::string_view>, int>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> key(tokens.begin() + i, tokens.begin() + i + n);
    ++counts[std::move(key)];
  }
  return counts;
}

int clipped_matches(const NgramCounts& cand, const NgramCounts& ref) {
  int m = 0;
  for (const auto& [gram, c] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

void check_tokenizers(const TokenizedText& a, const TokenizedText& b) {
  if (a.tokenizer_id != b.tokenizer_id) {
    throw ConfigError("tokenizer mismatch: '" + a.tokenizer_id + "' vs '" +
                      b.tokenizer_id + "'");
  }
}

Prf make_prf(double overlap, std::size_t cand_len, std::size_t ref_len) {
  Prf out;
  if (cand_len > 0) out.precision = overlap / static_cast<double>(cand_len);
  if (ref_len > 0) out.recall = overlap / static_cast<double>(ref_len);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::string pair_key(const std::string& session_id, const std::string& item_id) {
  return session_id + "/" + item_id;
}

Json summary_json(const Summary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"mean", opt(s.mean)}, {"std", opt(s.std)}, {"n_used", s.n_used}};
}

std::string_view smoothing_name(BleuSmoothing s) {
  return s == BleuSmoothing::kNone ? "none" : "add-epsilon";
}

}  // namespace

double bleu(const TokenizedText& candidate, const TokenizedText& reference,
            const BleuOptions& options) {
  check_tokenizers(candidate, reference);
  if (options.max_n < 1) throw ConfigError("bleu max_n must be >= 1");
  if (options.smoothing == BleuSmoothing::kAddEpsilon &&
      !(options.epsilon > 0.0 && options.epsilon <= 1.0)) {
    throw ConfigError("bleu epsilon must lie in (0, 1]");
  }
  const auto& c = candidate.tokens;
  const auto& r = reference.tokens;
  if (c.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= options.max_n; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    const std::size_t total = c.size() >= nn ? c.size() - nn + 1 : 0;
    const int matches = clipped_matches(count_ngrams(c, nn), count_ngrams(r, nn));
    double p = 0.0;
    if (matches > 0) {
      p = static_cast<double>(matches) / static_cast<double>(total);
    } else if (options.smoothing == BleuSmoothing::kAddEpsilon) {
      p = options.epsilon / static_cast<double>(std::max<std::size_t>(total, 1));
    } else {
      return 0.0;
    }
    log_sum += std::log(p);
  }
  const double cl = static_cast<double>(c.size());
  const double rl = static_cast<double>(r.size());
  const double bp = cl > rl ? 1.0 : std::exp(1.0 - rl / cl);
  return std::clamp(bp * std::exp(log_sum / options.max_n), 0.0, 1.0);
}

Prf rouge1(const TokenizedText& candidate, const TokenizedText& reference) {
  check_tokenizers(candidate, reference);
  const int overlap = clipped_matches(count_ngrams(candidate.tokens, 1),
                                      count_ngrams(reference.tokens, 1));
  return make_prf(overlap, candidate.tokens.size(), reference.tokens.size());
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row table over b.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Prf rougeL(const TokenizedText& candidate, const TokenizedText& reference) {
  check_tokenizers(candidate, reference);
  const auto lcs = lcs_length(candidate.tokens, reference.tokens);
  return make_prf(static_cast<double>(lcs), candidate.tokens.size(),
                  reference.tokens.size());
}

RationaleReport score_corpus(const std::vector<PredictionRecord>& predictions,
                             const std::vector<RationaleRef>& references,
                             const WaiInventory& inv, const Tokenizer& tokenizer,
                             const ScoreCorpusOptions& options) {
  RationaleReport report;
  report.tokenizer_id = tokenizer.id();
  report.bleu_options = options.bleu;

  std::map<std::string, const RationaleRef*> ref_index;
  for (const auto& r : references) ref_index[pair_key(r.session_id, r.item_id)] = &r;

  const bool by_fold = options.plan != nullptr && options.sessions != nullptr;
  std::map<std::string, std::string> client_of;
  if (by_fold) {
    report.std_over = "folds";
    report.k = options.plan->k;
    for (const auto& s : *options.sessions) client_of[s.session_id] = s.client_id;
  }

  std::vector<std::string> missing;
  std::vector<std::string> cand_texts, ref_texts;
  for (const auto& p : predictions) {
    const std::string key = pair_key(p.session_id, p.item_id);
    auto it = ref_index.find(key);
    if (it == ref_index.end()) {
      missing.push_back(key);
      continue;
    }
    PairScore ps{p.session_id, p.item_id, inv.dimension_of(p.item_id), -1, {}};
    if (by_fold) {
      auto c = client_of.find(p.session_id);
      if (c == client_of.end()) {
        throw LookupError("prediction for unknown session '" + p.session_id + "'");
      }
      ps.fold = options.plan->fold_of(c->second);
    }
    if (p.rationale.empty()) report.warnings.push_back("empty rationale for " + key);
    const auto cand = tokenizer(p.rationale);
    const auto ref = tokenizer(it->second->reference_rationale);
    ps.score.bleu = bleu(cand, ref, options.bleu);
    ps.score.rouge1_f = rouge1(cand, ref).f1;
    ps.score.rougeL_f = rougeL(cand, ref).f1;
    report.pairs.push_back(std::move(ps));
    cand_texts.push_back(p.rationale);
    ref_texts.push_back(it->second->reference_rationale);
  }
  if (!missing.empty()) {
    throw MissingDataError(std::to_string(missing.size()) +
                               " prediction(s) without a reference rationale, first: " +
                               missing.front(),
                           std::move(missing));
  }

  if (options.bertscore != nullptr) {
    auto bs = options.bertscore->score(cand_texts, ref_texts);
    report.bertscore_available = bs.available;
    report.bertscore_model_tag = bs.model_tag;
    if (bs.available) {
      for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        report.pairs[i].score.bertscore_f = bs.scores[i].f1;
      }
    } else {
      report.bertscore_note = "unavailable: " + bs.unavailable_reason;
      report.warnings.push_back("bertscore " + report.bertscore_note);
    }
  } else {
    report.bertscore_note = "unavailable: no scoring service configured";
  }

  using Getter = std::optional<double> (*)(const RationaleScore&);
  const std::array<Getter, 4> getters = {
      [](const RationaleScore& s) -> std::optional<double> { return s.bleu; },
      [](const RationaleScore& s) -> std::optional<double> { return s.rouge1_f; },
      [](const RationaleScore& s) -> std::optional<double> { return s.rougeL_f; },
      [](const RationaleScore& s) { return s.bertscore_f; }};

  for (Dimension d : kDimensions) {
    auto& dim = report.dimensions[index_of(d)];
    std::array<Summary*, 4> slots = {&dim.bleu, &dim.rouge1, &dim.rougeL, &dim.bertscore};
    for (const auto& p : report.pairs) dim.n_pairs += p.dimension == d;
    for (std::size_t m = 0; m < getters.size(); ++m) {
      std::vector<std::optional<double>> values;
      if (by_fold) {
        for (int f = 0; f < report.k; ++f) {
          double sum = 0.0;
          int n = 0;
          for (const auto& p : report.pairs) {
            if (p.dimension != d || p.fold != f) continue;
            if (auto v = getters[m](p.score)) {
              sum += *v;
              ++n;
            }
          }
          values.push_back(n > 0 ? std::optional<double>(sum / n) : std::nullopt);
        }
      } else {
        for (const auto& p : report.pairs) {
          if (p.dimension == d) values.push_back(getters[m](p.score));
        }
      }
      *slots[m] = summarize(values);
    }
  }
  return report;
}

Json rationale_report_to_json(const RationaleReport& r, bool include_pairs) {
  Json j;
  j["tokenizer_id"] = r.tokenizer_id;
  j["bleu"] = {{"max_n", r.bleu_options.max_n},
               {"smoothing", smoothing_name(r.bleu_options.smoothing)},
               {"epsilon", r.bleu_options.epsilon}};
  j["std_over"] = r.std_over;
  j["k"] = r.k;
  j["bertscore"] = {{"available", r.bertscore_available},
                    {"model_tag", r.bertscore_model_tag},
                    {"note", r.bertscore_note}};
  Json dims;
  for (Dimension d : kDimensions) {
    const auto& dim = r.dimensions[index_of(d)];
    dims[std::string(to_string(d))] = {{"n_pairs", dim.n_pairs},
                                       {"bleu", summary_json(dim.bleu)},
                                       {"rouge1_f", summary_json(dim.rouge1)},
                                       {"rougeL_f", summary_json(dim.rougeL)},
                                       {"bertscore_f", summary_json(dim.bertscore)}};
  }
  j["dimensions"] = std::move(dims);
  j["warnings"] = r.warnings;
  if (include_pairs) {
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
      Json row = {{"session_id", p.session_id},
                  {"item_id", p.item_id},
                  {"dimension", to_string(p.dimension)},
                  {"fold", p.fold},
                  {"bleu", p.score.bleu},
                  {"rouge1_f", p.score.rouge1_f},
                  {"rougeL_f", p.score.rougeL_f}};
      row["bertscore_f"] = p.score.bertscore_f ? Json(*p.score.bertscore_f) : Json(nullptr);
      pairs.push_back(std::move(row));
    }
    j["pairs"] = std::move(pairs);
  }
  return j;
}

std::string render_rationale_table(const RationaleReport& r) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "Metric");
  os << buf;
  for (Dimension d : kDimensions) {
    std::snprintf(buf, sizeof buf, " | %-12s", std::string(to_string(d)).c_str());
    os << buf;
  }
  os << '\n';
  auto row = [&](const char* name, Summary RationaleDimensionReport::*field) {
    std::snprintf(buf, sizeof buf, "%-10s", name);
    os << buf;
    for (const auto& dim : r.dimensions) {
      std::snprintf(buf, sizeof buf, " | %-12s", format_mean_std(dim.*field).c_str());
      os << buf;
    }
    os << '\n';
  };
  row("BLEU", &RationaleDimensionReport::bleu);
  row("ROUGE-1", &RationaleDimensionReport::rouge1);
  row("ROUGE-L", &RationaleDimensionReport::rougeL);
  row("BERTScore", &RationaleDimensionReport::bertscore);
  os << "tokenizer: " << r.tokenizer_id << "; std over " << r.std_over;
  if (!r.bertscore_available) os << "; BERTScore " << r.bertscore_note;
  os << '\n';
  return os.str();
}

Json human_rubric_template(const std::vector<PredictionRecord>& predictions,
                           const WaiInventory& inv) {
  Json rows = Json::array();
  for (const auto& p : predictions) {
    rows.push_back({{"session_id", p.session_id},
                    {"item_id", p.item_id},
                    {"dimension", to_string(inv.dimension_of(p.item_id))},
                    {"rationale", p.rationale},
                    {"faithfulness", nullptr},
                    {"relevance", nullptr},
                    {"informativeness", nullptr}});
  }
  return {{"scale", "1-5 per criterion; leave null when not rated"},
          {"criteria", {"faithfulness", "relevance", "informativeness"}},
          {"rows", std::move(rows)}};
}

}  // namespace alliance
