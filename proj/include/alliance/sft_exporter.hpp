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

// Fine-tuning datasets (one record per session and item) and the matching
// trainer configuration. Records use the prompt builder for the
// instruction and the parser's own JSON contract for the target, so a
// model trained on them answers in the format the gateway reads back.
//
// Record layout, one JSON object per line:
//   {"instruction": "...", "output": "{\"rationale\":...,\"score\":4}",
//    "meta": {"session_id", "item_id", "dimension", "variant"}}
// With chat formatting the first two fields become
//   "messages": [{"role": "user", ...}, {"role": "assistant", ...}].

#ifndef ALLIANCE_SFT_EXPORTER_HPP_
#define ALLIANCE_SFT_EXPORTER_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/fold_splitter.hpp"
#include "alliance/json_io.hpp"
#include "alliance/prompt.hpp"

namespace alliance {

enum class SftVariant { kRationale, kScoreOnly };

std::string_view to_string(SftVariant v);
SftVariant parse_sft_variant(std::string_view s);

struct SftRecord {
  std::string instruction;
  std::string output;
  std::string session_id;
  std::string item_id;
  Dimension dimension = Dimension::kGoal;
  SftVariant variant = SftVariant::kRationale;

  bool operator==(const SftRecord&) const = default;
};

// Twelve records per session, sessions sorted by id, items in inventory
// order. Every session needs client ratings; the rationale variant also
// needs a reference per (session, item). MissingDataError lists the gaps.
std::vector<SftRecord> build_sft_records(const std::vector<Session>& sessions,
                                         const std::vector<RationaleRef>& references,
                                         const WaiInventory& inv, SftVariant variant,
                                         const PromptSpec& spec = PromptSpec::defaults());

Json sft_record_to_json(const SftRecord& r, bool chat_format = false);
// Accepts both layouts.
SftRecord sft_record_from_json(const Json& j);

std::vector<SftRecord> read_sft_file(const std::filesystem::path& path);

// Client ratings recovered from record outputs, keyed by session.
std::map<std::string, ItemRatings> ratings_from_sft(const std::vector<SftRecord>& records);

struct SftExportOptions {
  SftVariant variant = SftVariant::kRationale;
  bool chat_format = false;
  PromptSpec spec = PromptSpec::defaults();
};

struct SftExportResult {
  std::filesystem::path train_path;
  std::filesystem::path eval_path;
  std::size_t train_records = 0;
  std::size_t eval_records = 0;
};

// Writes <out_dir>/train.jsonl and <out_dir>/eval.jsonl for one fold.
SftExportResult export_sft(const std::vector<Session>& sessions,
                           const std::vector<RationaleRef>& references,
                           const WaiInventory& inv, const FoldPlan& plan,
                           int fold_index, const std::filesystem::path& out_dir,
                           const SftExportOptions& options = {});

struct TrainConfig {
  int per_device_train_batch_size = 1;
  int gradient_accumulation_steps = 2;
  double warmup_ratio = 0.1;
  std::string lr_scheduler_type = "cosine";
  double learning_rate = 5e-7;
  std::string data_type = "bfloat16";
  std::string optimizer = "adamw";
  int num_train_epochs = 10;
  int seed = 123;
};

struct ResolvedTrainConfig {
  TrainConfig config;
  // "key: default -> value", in application order.
  std::vector<std::string> overrides;
};

// Applies "key" -> "value" overrides by field name. Unknown keys raise
// ConfigError; non-positive learning rate, epochs, batch or accumulation
// raise ValidationError.
ResolvedTrainConfig resolve_train_config(
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Flat "key: value" lines in the order of the struct, overrides noted as
// trailing comments.
std::string render_train_config(const ResolvedTrainConfig& r);

}  // namespace alliance

#endif  // ALLIANCE_SFT_EXPORTER_HPP_
