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

#include "alliance/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "rng.hpp"

namespace alliance {
namespace {

using detail::Rng;

// Spread of the client-level and session-level Beta draws. Smaller values
// mean wider spread; these give dimension-score standard deviations near 1.
constexpr double kClientConcentration = 6.0;
constexpr double kSessionConcentration = 8.0;

const std::vector<std::string> kCounselorLines = {
    "你好，今天想聊些什么呢？",
    "听起来这件事让你很困扰。",
    "你当时是怎么想的？",
    "我们可以一起看看这个情况。",
    "你愿意多说一些吗？",
    "这种情况持续多久了？",
    "你觉得最难的部分是什么？",
    "我注意到你提到了家里的事情。",
    "如果换一个角度看，会有什么不同？",
    "这周你有没有尝试我们上次聊到的做法？",
    "嗯嗯，我在听。",
    "你希望事情变成什么样子？",
};

const std::vector<std::string> kClientLines = {
    "最近睡得不太好，总是想很多。",
    "我也不知道该怎么办。",
    "和室友的关系让我很累。",
    "工作上的压力有点大。",
    "我试过了，但是没什么用。",
    "是的，差不多就是这样。",
    "谢谢你，这样说我好受一些。",
    "我觉得你没太明白我的意思。",
    "可能吧，我需要再想想。",
    "有时候我会觉得很孤单。",
    "我想让自己轻松一点。",
    "嗯。",
};

// Neutral padding for reference rationales. Shared by all dimensions and
// free of the planted vocabulary.
const std::vector<std::string> kFillerSentences = {
    "整体来看，双方的交流比较顺畅。",
    "来访者在对话中多次回应咨询师的提问。",
    "咨询师在对话里保持了耐心的态度。",
    "这些细节可以作为评分的依据。",
    "对话中也有一些停顿和简短的回复。",
    "来访者的表达总体上较为坦诚。",
    "从来访者的回复可以看出其当时的状态。",
    "咨询师的提问比较具体。",
};

std::string pad_id(const char* prefix, int n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, n);
  return buf;
}

std::string reference_text(Rng& rng, const std::vector<std::string>& lexicon,
                           int score, std::size_t target_len) {
  std::string w1 = lexicon[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(lexicon.size()) - 1))];
  std::string w2 = w1;
  if (lexicon.size() > 1) {
    while (w2 == w1) {
      w2 = lexicon[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(lexicon.size()) - 1))];
    }
  }
  std::string text = "在对话中，咨询师与来访者围绕" + w1 +
                     "进行了交流，来访者对" + w2 +
                     "的回应反映了当时的情况，因此该条目评分为" +
                     std::to_string(score) + "分。";
  // Padding walks the filler list from a random offset so lengths vary.
  auto k = static_cast<std::size_t>(rng.uniform_int(
      0, static_cast<std::int64_t>(kFillerSentences.size()) - 1));
  if (utf8_length(text) >= target_len) return text;
  while (utf8_length(text) < target_len) {
    text += kFillerSentences[k % kFillerSentences.size()];
    ++k;
  }
  // Cut back to target_len scalars, ending on a full stop.
  std::size_t scalars = 0;
  std::size_t last = 0;
  std::size_t cut = 0;
  for (; cut < text.size(); ++cut) {
    if ((static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) continue;
    if (scalars == target_len) break;
    last = cut;
    ++scalars;
  }
  text.resize(last);
  return text + "。";
}

void validate_config(const SynthConfig& cfg) {
  if (cfg.fold_count < 1) throw ConfigError("fold_count must be >= 1");
  if (cfg.n_clients < cfg.fold_count) {
    throw ConfigError("n_clients (" + std::to_string(cfg.n_clients) +
                      ") must be at least the fold count (" +
                      std::to_string(cfg.fold_count) + ")");
  }
  if (cfg.sessions_per_client.min < 1 ||
      cfg.sessions_per_client.max < cfg.sessions_per_client.min) {
    throw ConfigError("sessions_per_client must satisfy 1 <= min <= max");
  }
  if (cfg.turns.min < 2 || cfg.turns.max < cfg.turns.min) {
    throw ConfigError("turns must satisfy 2 <= min <= max");
  }
  for (double m : cfg.skew_target) {
    if (!(m >= 1.0 && m <= 5.0)) {
      throw ConfigError("skew_target must lie in [1, 5]");
    }
  }
  for (const auto& lex : cfg.rationale_lexicons) {
    if (lex.empty()) throw ConfigError("rationale lexicons must be non-empty");
  }
  auto is_fraction = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!is_fraction(cfg.annotate_fraction) ||
      !is_fraction(cfg.counselor_rating_fraction)) {
    throw ConfigError("fractions must lie in [0, 1]");
  }
  if (cfg.n_counselors < 1) throw ConfigError("n_counselors must be >= 1");
}

// Beta draw with the given mean. Degenerate means collapse to the endpoint.
double beta_with_mean(Rng& rng, double mean, double concentration) {
  if (mean <= 0.0) return 0.0;
  if (mean >= 1.0) return 1.0;
  return rng.beta(mean * concentration, (1.0 - mean) * concentration);
}

}  // namespace

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

SynthCorpus synth_corpus(const SynthConfig& cfg, const WaiInventory& inv) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  SynthCorpus corpus;

  std::vector<double> counselor_weights;
  for (int c = 0; c < cfg.n_counselors; ++c) {
    counselor_weights.push_back(1.0 / (c + 1.0));
  }

  int session_no = 0;
  for (int client = 0; client < cfg.n_clients; ++client) {
    const std::string client_id = pad_id("c", client + 1, 3);
    const std::string counselor_id =
        pad_id("t", static_cast<int>(rng.weighted_index(counselor_weights)) + 1,
               2);
    // Client-level propensity per dimension on the [0, 1] Binomial scale.
    std::array<double, 3> client_p{};
    for (Dimension d : kDimensions) {
      const double mean = (cfg.skew_target[index_of(d)] - 1.0) / 4.0;
      client_p[index_of(d)] = beta_with_mean(rng, mean, kClientConcentration);
    }
    const auto n_sessions = static_cast<int>(rng.uniform_int(
        cfg.sessions_per_client.min, cfg.sessions_per_client.max));
    for (int k = 0; k < n_sessions; ++k) {
      Session s;
      s.session_id = pad_id("s", ++session_no, 5);
      s.client_id = client_id;
      s.counselor_id = counselor_id;

      std::array<double, 3> session_p{};
      for (Dimension d : kDimensions) {
        session_p[index_of(d)] = beta_with_mean(rng, client_p[index_of(d)],
                                                kSessionConcentration);
      }
      ItemRatings ratings;
      for (const auto& item : inv.items()) {
        ratings[item.item_id] =
            1 + rng.binomial(4, session_p[index_of(item.dimension)]);
      }
      s.client_item_ratings = ratings;

      if (rng.bernoulli(cfg.counselor_rating_fraction)) {
        ItemRatings cr;
        for (const auto& item : inv.items()) {
          const double mean = (cfg.skew_target[index_of(item.dimension)] - 1.0) / 4.0;
          const double own = beta_with_mean(rng, mean, kClientConcentration);
          const double q = 0.35 * session_p[index_of(item.dimension)] + 0.65 * own;
          cr[item.item_id] = 1 + rng.binomial(4, q);
        }
        s.counselor_item_ratings = cr;
      }

      const bool annotate = rng.bernoulli(cfg.annotate_fraction);
      const double mean_p =
          (session_p[0] + session_p[1] + session_p[2]) / 3.0;
      const auto n_turns =
          static_cast<int>(rng.uniform_int(cfg.turns.min, cfg.turns.max));
      Speaker speaker = Speaker::kCounselor;
      std::string last_strategy = "Supporting";
      for (int t = 0; t < n_turns; ++t) {
        if (t == n_turns - 1 && speaker == Speaker::kCounselor &&
            std::none_of(s.utterances.begin(), s.utterances.end(),
                         [](const Utterance& u) {
                           return u.speaker == Speaker::kClient;
                         })) {
          speaker = Speaker::kClient;
        }
        Utterance u;
        u.index = t;
        u.speaker = speaker;
        const auto& pool =
            speaker == Speaker::kCounselor ? kCounselorLines : kClientLines;
        u.text = pool[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
        if (annotate) {
          if (speaker == Speaker::kCounselor) {
            last_strategy = rng.bernoulli(0.7) ? "Supporting" : "Challenging";
            u.strategy = last_strategy;
          } else {
            // Lower-alliance sessions draw more negative reactions.
            const double base = last_strategy == "Supporting" ? 0.6 : 0.7;
            u.reaction = rng.bernoulli(std::clamp(base - 0.5 * mean_p, 0.02, 0.98))
                             ? "Negative"
                             : "Positive";
          }
        }
        s.utterances.push_back(std::move(u));
        // Mostly alternating, with occasional consecutive turns.
        if (rng.bernoulli(0.8)) {
          speaker = speaker == Speaker::kCounselor ? Speaker::kClient
                                                   : Speaker::kCounselor;
        }
      }

      for (const auto& item : inv.items()) {
        const double len = std::max(
            40.0, cfg.rationale_length_mean + cfg.rationale_length_sd * rng.normal());
        corpus.references.push_back(
            {s.session_id, item.item_id,
             reference_text(rng, cfg.rationale_lexicons[index_of(item.dimension)],
                            ratings.at(item.item_id),
                            static_cast<std::size_t>(len))});
      }
      corpus.sessions.push_back(std::move(s));
    }
  }
  return corpus;
}

}  // namespace alliance
