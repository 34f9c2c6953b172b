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

// JSONL readers and writers for sessions, predictions and reference
// rationales, plus the inventory config file.
//
// Session line:
//   {"session_id","client_id","counselor_id",
//    "utterances":[{"i","speaker","text","strategy"?,"reaction"?}],
//    "client_item_ratings"?:{item_id:int},"counselor_item_ratings"?:{...}}
// Prediction line:
//   {"session_id","item_id","score","rationale","model_id","raw_response",
//    "decode":{"temperature","nucleus"}}
// RationaleRef line:
//   {"session_id","item_id","reference_rationale"}

#ifndef ALLIANCE_CORPUS_IO_HPP_
#define ALLIANCE_CORPUS_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/json_io.hpp"

namespace alliance {

enum class RecordKind { kSession, kPrediction, kRationaleRef };

struct CorpusFile {
  std::filesystem::path path;
  RecordKind record_kind = RecordKind::kSession;
  std::size_t line_count = 0;
};

Json session_to_json(const Session& s);
Session session_from_json(const Json& j);
Json prediction_to_json(const PredictionRecord& p);
PredictionRecord prediction_from_json(const Json& j);
Json rationale_ref_to_json(const RationaleRef& r);
RationaleRef rationale_ref_from_json(const Json& j);

// Parses and validates every line. A malformed line raises ParseError with
// its line number; schema and invariant violations over the whole file are
// gathered into one ValidationError ("line N: ...").
std::vector<Session> parse_sessions(std::istream& in, const WaiInventory& inv);
std::vector<Session> read_sessions(const std::filesystem::path& path,
                                   const WaiInventory& inv);
std::size_t write_sessions(const std::vector<Session>& sessions,
                           const std::filesystem::path& path);

std::vector<PredictionRecord> parse_predictions(std::istream& in);
std::vector<PredictionRecord> read_predictions(
    const std::filesystem::path& path);
// Returns the number of lines written.
std::size_t write_predictions(const std::vector<PredictionRecord>& records,
                              const std::filesystem::path& path);

std::vector<RationaleRef> read_rationale_refs(
    const std::filesystem::path& path);
std::size_t write_rationale_refs(const std::vector<RationaleRef>& refs,
                                 const std::filesystem::path& path);

// Inventory config:
//   {"scale_anchors":{"1":"Seldom",...},
//    "items":[{"item_id","dimension","client_text"}, ...]}
WaiInventory inventory_from_json(const Json& j);
Json inventory_to_json(const WaiInventory& inv);
WaiInventory load_inventory(const std::filesystem::path& path);

CorpusFile describe_corpus_file(const std::filesystem::path& path,
                                RecordKind kind);

}  // namespace alliance

#endif  // ALLIANCE_CORPUS_IO_HPP_
