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

#include "alliance/sft_exporter.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "alliance/response_parser.hpp"

namespace alliance {
namespace {

std::string target_json(SftVariant variant, const std::string& rationale, int score) {
  Json j;
  if (variant == SftVariant::kRationale) j["rationale"] = rationale;
  j["score"] = score;
  return dump_line(j);
}

// Shortest round-tripping text, with the exponent unpadded ("5e-7").
std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  const auto e = s.find('e');
  if (e != std::string::npos) {
    std::size_t digits = e + 1;
    if (digits < s.size() && (s[digits] == '-' || s[digits] == '+')) {
      if (s[digits] == '+') s.erase(digits, 1); else ++digits;
    }
    while (digits + 1 < s.size() && s[digits] == '0') s.erase(digits, 1);
  }
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("override " + key + "=" + value + " is not a number");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("override " + key + "=" + value + " is not an integer");
  }
  return v;
}

void write_records(const std::filesystem::path& path, const std::vector<SftRecord>& recs,
                   bool chat) {
  std::string text;
  for (const auto& r : recs) {
    text += dump_line(sft_record_to_json(r, chat));
    text += '\n';
  }
  write_text_file(path, text);
}

}  // namespace

std::string_view to_string(SftVariant v) {
  return v == SftVariant::kRationale ? "rationale" : "score_only";
}

SftVariant parse_sft_variant(std::string_view s) {
  if (s == "rationale") return SftVariant::kRationale;
  if (s == "score_only" || s == "score-only") return SftVariant::kScoreOnly;
  throw ConfigError("unknown SFT variant '" + std::string(s) +
                    "' (expected rationale or score_only)");
}

std::vector<SftRecord> build_sft_records(const std::vector<Session>& sessions,
                                         const std::vector<RationaleRef>& references,
                                         const WaiInventory& inv, SftVariant variant,
                                         const PromptSpec& spec) {
  std::map<std::string, const std::string*> refs;
  for (const auto& r : references) refs[r.session_id + "/" + r.item_id] = &r.reference_rationale;

  std::vector<const Session*> order;
  for (const auto& s : sessions) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const Session* a, const Session* b) {
    return a->session_id < b->session_id;
  });

  std::vector<std::string> missing;
  std::vector<SftRecord> out;
  out.reserve(sessions.size() * kInventorySize);
  for (const Session* s : order) {
    if (!s->client_item_ratings) {
      missing.push_back(s->session_id + " (no client ratings)");
      continue;
    }
    for (const auto& item : inv.items()) {
      auto rating = s->client_item_ratings->find(item.item_id);
      if (rating == s->client_item_ratings->end()) {
        missing.push_back(s->session_id + "/" + item.item_id + " (no rating)");
        continue;
      }
      std::string rationale;
      if (variant == SftVariant::kRationale) {
        auto ref = refs.find(s->session_id + "/" + item.item_id);
        if (ref == refs.end()) {
          missing.push_back(s->session_id + "/" + item.item_id + " (no reference)");
          continue;
        }
        rationale = *ref->second;
      }
      out.push_back({build_prompt(*s, item, spec),
                     target_json(variant, rationale, rating->second), s->session_id,
                     item.item_id, item.dimension, variant});
    }
  }
  if (!missing.empty()) {
    throw MissingDataError(std::to_string(missing.size()) +
                               " gap(s) block the SFT export, first: " + missing.front(),
                           std::move(missing));
  }
  return out;
}

Json sft_record_to_json(const SftRecord& r, bool chat_format) {
  Json j;
  if (chat_format) {
    j["messages"] = Json::array({{{"role", "user"}, {"content", r.instruction}},
                                 {{"role", "assistant"}, {"content", r.output}}});
  } else {
    j["instruction"] = r.instruction;
    j["output"] = r.output;
  }
  j["meta"] = {{"session_id", r.session_id},
               {"item_id", r.item_id},
               {"dimension", to_string(r.dimension)},
               {"variant", to_string(r.variant)}};
  return j;
}

SftRecord sft_record_from_json(const Json& j) {
  SftRecord r;
  if (j.contains("messages")) {
    const Json& msgs = require_field(j, "messages");
    if (!msgs.is_array() || msgs.size() != 2) {
      throw ParseError("chat SFT record needs exactly two messages");
    }
    r.instruction = require_string(msgs[0], "content");
    r.output = require_string(msgs[1], "content");
  } else {
    r.instruction = require_string(j, "instruction");
    r.output = require_string(j, "output");
  }
  const Json& meta = require_field(j, "meta");
  r.session_id = require_string(meta, "session_id");
  r.item_id = require_string(meta, "item_id");
  r.dimension = parse_dimension(require_string(meta, "dimension"));
  r.variant = parse_sft_variant(require_string(meta, "variant"));
  return r;
}

std::vector<SftRecord> read_sft_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::vector<SftRecord> out;
  for_each_jsonl(in, [&](const Json& j, std::size_t line) {
    try {
      out.push_back(sft_record_from_json(j));
    } catch (const Error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": " + e.what(), line);
    }
  });
  return out;
}

std::map<std::string, ItemRatings> ratings_from_sft(const std::vector<SftRecord>& records) {
  std::map<std::string, ItemRatings> out;
  for (const auto& r : records) {
    const auto v = parse_verdict(r.output, r.variant == SftVariant::kRationale);
    if (!v.ok()) {
      throw ParseError("SFT output for " + r.session_id + "/" + r.item_id +
                       " does not parse: " + v.detail);
    }
    out[r.session_id][r.item_id] = *v.score;
  }
  return out;
}

SftExportResult export_sft(const std::vector<Session>& sessions,
                           const std::vector<RationaleRef>& references,
                           const WaiInventory& inv, const FoldPlan& plan,
                           int fold_index, const std::filesystem::path& out_dir,
                           const SftExportOptions& options) {
  const FoldView view = fold_view(plan, sessions, fold_index);
  const auto train = build_sft_records(view.train, references, inv, options.variant,
                                       options.spec);
  const auto eval = build_sft_records(view.eval, references, inv, options.variant,
                                      options.spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw FileError("cannot create " + out_dir.string() + ": " + ec.message());
  SftExportResult res{out_dir / "train.jsonl", out_dir / "eval.jsonl", train.size(),
                      eval.size()};
  write_records(res.train_path, train, options.chat_format);
  write_records(res.eval_path, eval, options.chat_format);
  return res;
}

ResolvedTrainConfig resolve_train_config(
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  ResolvedTrainConfig r;
  TrainConfig& c = r.config;
  std::vector<std::string> bad;
  for (const auto& [key, value] : overrides) {
    std::string before;
    if (key == "per_device_train_batch_size") {
      before = std::to_string(c.per_device_train_batch_size);
      c.per_device_train_batch_size = parse_int(key, value);
      if (c.per_device_train_batch_size <= 0) bad.push_back(key + " must be positive");
    } else if (key == "gradient_accumulation_steps") {
      before = std::to_string(c.gradient_accumulation_steps);
      c.gradient_accumulation_steps = parse_int(key, value);
      if (c.gradient_accumulation_steps <= 0) bad.push_back(key + " must be positive");
    } else if (key == "warmup_ratio") {
      before = format_double(c.warmup_ratio);
      c.warmup_ratio = parse_double(key, value);
      if (c.warmup_ratio < 0.0 || c.warmup_ratio > 1.0) bad.push_back(key + " must lie in [0, 1]");
    } else if (key == "lr_scheduler_type") {
      before = c.lr_scheduler_type;
      c.lr_scheduler_type = value;
    } else if (key == "learning_rate") {
      before = format_double(c.learning_rate);
      c.learning_rate = parse_double(key, value);
      if (!(c.learning_rate > 0.0)) bad.push_back(key + " must be positive");
    } else if (key == "data_type") {
      before = c.data_type;
      c.data_type = value;
    } else if (key == "optimizer") {
      before = c.optimizer;
      c.optimizer = value;
    } else if (key == "num_train_epochs") {
      before = std::to_string(c.num_train_epochs);
      c.num_train_epochs = parse_int(key, value);
      if (c.num_train_epochs <= 0) bad.push_back(key + " must be positive");
    } else if (key == "seed") {
      before = std::to_string(c.seed);
      c.seed = parse_int(key, value);
    } else {
      throw ConfigError("unknown training option '" + key + "'");
    }
    r.overrides.push_back(key + ": " + before + " -> " + value);
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return r;
}

std::string render_train_config(const ResolvedTrainConfig& r) {
  const TrainConfig& c = r.config;
  std::map<std::string, std::string> noted;
  for (const auto& o : r.overrides) noted[o.substr(0, o.find(':'))] = o;
  std::ostringstream os;
  auto line = [&](const std::string& key, const std::string& value) {
    os << key << ": " << value;
    if (auto it = noted.find(key); it != noted.end()) os << "  # override " << it->second;
    os << '\n';
  };
  line("per_device_train_batch_size", std::to_string(c.per_device_train_batch_size));
  line("gradient_accumulation_steps", std::to_string(c.gradient_accumulation_steps));
  line("warmup_ratio", format_double(c.warmup_ratio));
  line("lr_scheduler_type", c.lr_scheduler_type);
  line("learning_rate", format_double(c.learning_rate));
  line("data_type", c.data_type);
  line("optimizer", c.optimizer);
  line("num_train_epochs", std::to_string(c.num_train_epochs));
  line("seed", std::to_string(c.seed));
  return os.str();
}

}  // namespace alliance
