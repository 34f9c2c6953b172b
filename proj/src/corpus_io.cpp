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

#include "alliance/corpus_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace alliance {
namespace {

Json ratings_to_json(const ItemRatings& r) {
  Json j = Json::object();
  for (const auto& [id, v] : r) j[id] = v;
  return j;
}

ItemRatings ratings_from_json(const Json& j, std::string_view key) {
  if (!j.is_object()) {
    throw ParseError("field \"" + std::string(key) + "\" must be an object");
  }
  ItemRatings out;
  for (const auto& [id, v] : j.items()) {
    if (!v.is_number_integer()) {
      throw ParseError("rating for '" + id + "' must be an integer");
    }
    out[id] = v.get<int>();
  }
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  return in;
}

template <typename T, typename ToJson>
std::size_t write_jsonl(const std::vector<T>& rows,
                        const std::filesystem::path& path, ToJson to_json) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open '" + path.string() + "' for writing");
  for (const auto& row : rows) out << dump_line(to_json(row)) << '\n';
  out.flush();
  if (!out) throw FileError("write failed for '" + path.string() + "'");
  return rows.size();
}

}  // namespace

Json session_to_json(const Session& s) {
  Json j;
  j["session_id"] = s.session_id;
  j["client_id"] = s.client_id;
  j["counselor_id"] = s.counselor_id;
  Json utts = Json::array();
  for (const auto& u : s.utterances) {
    Json ju;
    ju["i"] = u.index;
    ju["speaker"] = std::string(to_string(u.speaker));
    ju["text"] = u.text;
    if (u.strategy) ju["strategy"] = *u.strategy;
    if (u.reaction) ju["reaction"] = *u.reaction;
    utts.push_back(std::move(ju));
  }
  j["utterances"] = std::move(utts);
  if (s.client_item_ratings) {
    j["client_item_ratings"] = ratings_to_json(*s.client_item_ratings);
  }
  if (s.counselor_item_ratings) {
    j["counselor_item_ratings"] = ratings_to_json(*s.counselor_item_ratings);
  }
  return j;
}

Session session_from_json(const Json& j) {
  Session s;
  s.session_id = require_string(j, "session_id");
  s.client_id = require_string(j, "client_id");
  s.counselor_id = require_string(j, "counselor_id");
  const Json& utts = require_field(j, "utterances");
  if (!utts.is_array()) throw ParseError("field \"utterances\" must be an array");
  for (const auto& ju : utts) {
    if (!ju.is_object()) throw ParseError("utterance must be an object");
    Utterance u;
    u.index = static_cast<int>(require_int(ju, "i"));
    try {
      u.speaker = parse_speaker(require_string(ju, "speaker"));
    } catch (const LookupError& e) {
      throw ParseError(e.what());
    }
    u.text = require_string(ju, "text");
    if (ju.contains("strategy")) u.strategy = require_string(ju, "strategy");
    if (ju.contains("reaction")) u.reaction = require_string(ju, "reaction");
    s.utterances.push_back(std::move(u));
  }
  if (j.contains("client_item_ratings")) {
    s.client_item_ratings =
        ratings_from_json(j.at("client_item_ratings"), "client_item_ratings");
  }
  if (j.contains("counselor_item_ratings")) {
    s.counselor_item_ratings = ratings_from_json(j.at("counselor_item_ratings"),
                                                 "counselor_item_ratings");
  }
  return s;
}

Json prediction_to_json(const PredictionRecord& p) {
  Json j;
  j["session_id"] = p.session_id;
  j["item_id"] = p.item_id;
  j["score"] = p.score;
  j["rationale"] = p.rationale;
  j["model_id"] = p.model_id;
  j["raw_response"] = p.raw_response;
  j["decode"] = {{"temperature", p.decode.temperature},
                 {"nucleus", p.decode.nucleus}};
  return j;
}

PredictionRecord prediction_from_json(const Json& j) {
  PredictionRecord p;
  p.session_id = require_string(j, "session_id");
  p.item_id = require_string(j, "item_id");
  p.score = static_cast<int>(require_int(j, "score"));
  p.rationale = require_string(j, "rationale");
  p.model_id = require_string(j, "model_id");
  p.raw_response = require_string(j, "raw_response");
  const Json& d = require_field(j, "decode");
  p.decode.temperature = require_number(d, "temperature");
  p.decode.nucleus = require_number(d, "nucleus");
  return p;
}

Json rationale_ref_to_json(const RationaleRef& r) {
  Json j;
  j["session_id"] = r.session_id;
  j["item_id"] = r.item_id;
  j["reference_rationale"] = r.reference_rationale;
  return j;
}

RationaleRef rationale_ref_from_json(const Json& j) {
  return {require_string(j, "session_id"), require_string(j, "item_id"),
          require_string(j, "reference_rationale")};
}

std::vector<Session> parse_sessions(std::istream& in, const WaiInventory& inv) {
  std::vector<Session> out;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  for_each_jsonl(in, [&](const Json& j, std::size_t line) {
    const std::string where = "line " + std::to_string(line) + ": ";
    Session s;
    try {
      s = session_from_json(j);
    } catch (const ParseError& e) {
      problems.push_back(where + e.what());
      return;
    }
    for (const auto& v : validate_session(s, inv)) {
      problems.push_back(where + v.message);
    }
    if (!seen.insert(s.session_id).second) {
      problems.push_back(where + "duplicate session_id '" + s.session_id + "'");
    }
    out.push_back(std::move(s));
  });
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return out;
}

std::vector<Session> read_sessions(const std::filesystem::path& path,
                                   const WaiInventory& inv) {
  auto in = open_for_read(path);
  return parse_sessions(in, inv);
}

std::size_t write_sessions(const std::vector<Session>& sessions,
                           const std::filesystem::path& path) {
  return write_jsonl(sessions, path, session_to_json);
}

std::vector<PredictionRecord> parse_predictions(std::istream& in) {
  std::vector<PredictionRecord> out;
  for_each_jsonl(in, [&](const Json& j, std::size_t line) {
    try {
      out.push_back(prediction_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
    }
  });
  return out;
}

std::vector<PredictionRecord> read_predictions(
    const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_predictions(in);
}

std::size_t write_predictions(const std::vector<PredictionRecord>& records,
                              const std::filesystem::path& path) {
  return write_jsonl(records, path, prediction_to_json);
}

std::vector<RationaleRef> read_rationale_refs(
    const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::vector<RationaleRef> out;
  for_each_jsonl(in, [&](const Json& j, std::size_t line) {
    try {
      out.push_back(rationale_ref_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
    }
  });
  return out;
}

std::size_t write_rationale_refs(const std::vector<RationaleRef>& refs,
                                 const std::filesystem::path& path) {
  return write_jsonl(refs, path, rationale_ref_to_json);
}

WaiInventory inventory_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("inventory must be a JSON object");
  std::map<int, std::string> anchors;
  try {
    const Json& ja = require_field(j, "scale_anchors");
    if (!ja.is_object()) throw ParseError("\"scale_anchors\" must be an object");
    for (const auto& [k, v] : ja.items()) {
      if (!v.is_string()) throw ParseError("scale anchor labels must be strings");
      anchors[std::stoi(k)] = v.get<std::string>();
    }
    std::vector<WaiItem> items;
    const Json& ji = require_field(j, "items");
    if (!ji.is_array()) throw ParseError("\"items\" must be an array");
    for (const auto& e : ji) {
      items.push_back({require_string(e, "item_id"),
                       parse_dimension(require_string(e, "dimension")),
                       require_string(e, "client_text")});
    }
    return WaiInventory(std::move(items), std::move(anchors));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("inventory: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("inventory: scale anchor keys must be integers");
  }
}

Json inventory_to_json(const WaiInventory& inv) {
  Json j;
  Json anchors = Json::object();
  for (const auto& [k, v] : inv.scale_anchors()) anchors[std::to_string(k)] = v;
  j["scale_anchors"] = std::move(anchors);
  Json items = Json::array();
  for (const auto& item : inv.items()) {
    items.push_back({{"item_id", item.item_id},
                     {"dimension", std::string(to_string(item.dimension))},
                     {"client_text", item.client_text}});
  }
  j["items"] = std::move(items);
  return j;
}

WaiInventory load_inventory(const std::filesystem::path& path) {
  return inventory_from_json(read_json_file(path));
}

CorpusFile describe_corpus_file(const std::filesystem::path& path,
                                RecordKind kind) {
  auto in = open_for_read(path);
  std::size_t n = 0;
  for_each_jsonl(in, [&](const Json&, std::size_t) { ++n; });
  return {path, kind, n};
}

}  // namespace alliance
