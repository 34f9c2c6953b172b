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

#include "alliance/lexical_logodds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "alliance/synth.hpp"

namespace alliance {

void CountTable::add(const CountTable& other) {
  if (other.total == 0 && other.counts.empty()) return;
  if (tokenizer_id.empty()) {
    tokenizer_id = other.tokenizer_id;
  } else if (!other.tokenizer_id.empty() && other.tokenizer_id != tokenizer_id) {
    throw ConfigError("cannot merge counts from tokenizers '" + tokenizer_id +
                      "' and '" + other.tokenizer_id + "'");
  }
  for (const auto& [w, c] : other.counts) counts[w] += c;
  total += other.total;
}

std::int64_t CountTable::count(const std::string& w) const {
  auto it = counts.find(w);
  return it == counts.end() ? 0 : it->second;
}

CountTable count_unigrams(const std::vector<TokenizedText>& texts) {
  CountTable t;
  for (const auto& text : texts) {
    if (t.tokenizer_id.empty()) {
      t.tokenizer_id = text.tokenizer_id;
    } else if (text.tokenizer_id != t.tokenizer_id) {
      throw ConfigError("mixed tokenizers: '" + t.tokenizer_id + "' and '" +
                        text.tokenizer_id + "'");
    }
    for (const auto& tok : text.tokens) ++t.counts[tok];
    t.total += static_cast<std::int64_t>(text.tokens.size());
  }
  return t;
}

Prior make_prior(const CountTable& pooled, double scale, double offset) {
  if (!(scale > 0.0)) throw ConfigError("prior scale must be positive");
  if (offset < 0.0) throw ConfigError("prior offset must be non-negative");
  Prior p;
  for (const auto& [w, c] : pooled.counts) p[w] = scale * static_cast<double>(c) + offset;
  return p;
}

std::vector<WordLogOdds> log_odds(const CountTable& target, const CountTable& contrast,
                                  const Prior& prior) {
  double alpha0 = 0.0;
  for (const auto& [w, a] : prior) alpha0 += a;

  std::set<std::string> vocab;
  for (const auto& [w, c] : target.counts) vocab.insert(w);
  for (const auto& [w, c] : contrast.counts) vocab.insert(w);

  const auto nt = static_cast<double>(target.total);
  const auto nc = static_cast<double>(contrast.total);
  std::vector<WordLogOdds> out;
  out.reserve(vocab.size());
  for (const auto& w : vocab) {
    auto it = prior.find(w);
    const double a = it == prior.end() ? 0.0 : it->second;
    if (!(a > 0.0)) {
      throw ConfigError("prior has no positive mass for observed word '" + w + "'");
    }
    const auto yt = static_cast<double>(target.count(w));
    const auto yc = static_cast<double>(contrast.count(w));
    const double rest_t = nt + alpha0 - yt - a;
    const double rest_c = nc + alpha0 - yc - a;
    if (!(rest_t > 0.0) || !(rest_c > 0.0)) {
      throw ConfigError("prior total leaves no mass outside word '" + w + "'");
    }
    WordLogOdds r;
    r.word = w;
    r.delta = std::log((yt + a) / rest_t) - std::log((yc + a) / rest_c);
    r.variance = 1.0 / (yt + a) + 1.0 / (yc + a);
    r.z = r.delta / std::sqrt(r.variance);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const WordLogOdds& x, const WordLogOdds& y) {
    if (x.z != y.z) return x.z > y.z;
    return x.word < y.word;
  });
  return out;
}

std::array<std::vector<WordLogOdds>, 3> dimension_keywords(
    const std::array<std::vector<TokenizedText>, 3>& groups,
    const KeywordOptions& options) {
  if (options.top_k < 0) throw ConfigError("top_k must be non-negative");
  std::array<CountTable, 3> tables;
  CountTable pooled;
  int populated = 0;
  for (std::size_t d = 0; d < 3; ++d) {
    tables[d] = count_unigrams(groups[d]);
    populated += !groups[d].empty();
    pooled.add(tables[d]);
  }
  if (populated < 2) {
    throw MissingDataError("log-odds comparison needs at least two populated dimensions");
  }
  const Prior prior = make_prior(pooled, options.prior_scale);

  std::array<std::vector<WordLogOdds>, 3> out;
  for (std::size_t d = 0; d < 3; ++d) {
    if (groups[d].empty()) continue;
    CountTable rest;
    for (std::size_t o = 0; o < 3; ++o) {
      if (o != d) rest.add(tables[o]);
    }
    for (auto& w : log_odds(tables[d], rest, prior)) {
      if (static_cast<int>(out[d].size()) >= options.top_k) break;
      if (w.z > options.z_threshold) out[d].push_back(std::move(w));
    }
  }
  return out;
}

LexicalReport lexical_report(const std::vector<RationaleRef>& rationales,
                             const WaiInventory& inv, const Tokenizer& tokenizer,
                             const KeywordOptions& options) {
  LexicalReport report;
  report.tokenizer_id = tokenizer.id();
  report.options = options;
  std::array<std::vector<TokenizedText>, 3> groups;
  std::array<std::vector<double>, 3> lengths;
  for (const auto& r : rationales) {
    const auto d = index_of(inv.dimension_of(r.item_id));
    groups[d].push_back(tokenizer(r.reference_rationale));
    lengths[d].push_back(static_cast<double>(utf8_length(r.reference_rationale)));
  }
  const auto keywords = dimension_keywords(groups, options);
  for (std::size_t d = 0; d < 3; ++d) {
    auto& row = report.rows[d];
    row.n_rationales = static_cast<int>(lengths[d].size());
    row.keywords = keywords[d];
    if (lengths[d].empty()) continue;
    double sum = 0.0;
    for (double v : lengths[d]) sum += v;
    row.length_mean = sum / static_cast<double>(lengths[d].size());
    if (lengths[d].size() > 1) {
      double ss = 0.0;
      for (double v : lengths[d]) ss += (v - row.length_mean) * (v - row.length_mean);
      row.length_std = std::sqrt(ss / static_cast<double>(lengths[d].size() - 1));
    }
  }
  return report;
}

Json lexical_report_to_json(const LexicalReport& r) {
  Json j;
  j["tokenizer_id"] = r.tokenizer_id;
  j["top_k"] = r.options.top_k;
  j["z_threshold"] = r.options.z_threshold;
  j["prior_scale"] = r.options.prior_scale;
  j["length_unit"] = "unicode_scalar";
  Json dims;
  for (Dimension d : kDimensions) {
    const auto& row = r.rows[index_of(d)];
    Json kws = Json::array();
    for (const auto& w : row.keywords) {
      kws.push_back({{"word", w.word}, {"z", w.z}, {"delta", w.delta},
                     {"variance", w.variance}});
    }
    dims[std::string(to_string(d))] = {{"n_rationales", row.n_rationales},
                                       {"length_mean", row.length_mean},
                                       {"length_std", row.length_std},
                                       {"keywords", std::move(kws)}};
  }
  j["dimensions"] = std::move(dims);
  return j;
}

std::string render_lexical_table(const LexicalReport& r) {
  std::ostringstream os;
  os << "Dim  | Length        | Lexical features (z)\n";
  char buf[64];
  for (Dimension d : kDimensions) {
    const auto& row = r.rows[index_of(d)];
    std::snprintf(buf, sizeof buf, "%-4s | %.2f_{%.2f}", std::string(to_string(d)).c_str(),
                  row.length_mean, row.length_std);
    os << buf << " | ";
    for (std::size_t i = 0; i < row.keywords.size(); ++i) {
      std::snprintf(buf, sizeof buf, " (%.2f)", row.keywords[i].z);
      os << (i ? ", " : "") << row.keywords[i].word << buf;
    }
    if (row.keywords.empty()) os << "(none above z threshold)";
    os << '\n';
  }
  os << "tokenizer: " << r.tokenizer_id << "; length in Unicode scalars\n";
  return os.str();
}

}  // namespace alliance
