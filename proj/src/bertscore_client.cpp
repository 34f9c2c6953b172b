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

#include "alliance/bertscore_client.hpp"

#include <algorithm>

#include "alliance/errors.hpp"
#include "alliance/http_transport.hpp"
#include "alliance/json_io.hpp"

namespace alliance {
namespace {

double unit_value(const Json& obj, const char* key, std::size_t index) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ContractError("bertscore reply: scores[" + std::to_string(index) +
                        "] lacks numeric '" + key + "'");
  }
  const double v = it->get<double>();
  // Cosine aggregates can overshoot 1 by rounding in the service.
  if (!(v >= -1e-6 && v <= 1.0 + 1e-6)) {
    throw ContractError("bertscore reply: scores[" + std::to_string(index) + "]." +
                        key + " = " + std::to_string(v) + " outside [0, 1]");
  }
  return std::clamp(v, 0.0, 1.0);
}

BertScoreResult unavailable(std::string reason) {
  BertScoreResult r;
  r.unavailable_reason = std::move(reason);
  return r;
}

}  // namespace

BertScoreClient::BertScoreClient(std::string base_url, BertScoreOptions options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {
  if (options_.batch_size < 1) throw ConfigError("bertscore batch_size must be >= 1");
}

BertScoreResult BertScoreClient::score(const std::vector<std::string>& candidates,
                                       const std::vector<std::string>& references) const {
  if (candidates.size() != references.size()) {
    throw ContractError("bertscore: " + std::to_string(candidates.size()) +
                        " candidates vs " + std::to_string(references.size()) +
                        " references");
  }
  if (base_url_.empty()) return unavailable("no scoring service configured");
  BertScoreResult out;
  out.available = true;
  const auto batch = static_cast<std::size_t>(options_.batch_size);
  const std::string url = join_url(base_url_, "/bertscore");
  for (std::size_t start = 0; start < candidates.size(); start += batch) {
    const std::size_t end = std::min(candidates.size(), start + batch);
    Json req;
    req["candidates"] = std::vector<std::string>(candidates.begin() + start,
                                                 candidates.begin() + end);
    req["references"] = std::vector<std::string>(references.begin() + start,
                                                 references.begin() + end);
    req["options"] = {{"idf", options_.idf}, {"model_tag", options_.model_tag}};
    HttpResponse res;
    try {
      res = http_post_json(url, dump_line(req), {}, options_.timeout);
    } catch (const TransportError& e) {
      return unavailable(e.what());
    }
    if (res.status == 503) return unavailable("scoring service not ready (503)");
    if (res.status != 200) {
      throw TransportError("bertscore: HTTP " + std::to_string(res.status) + ": " +
                               res.body.substr(0, 200),
                           /*transient=*/false, res.status);
    }
    Json body;
    try {
      body = Json::parse(res.body);
    } catch (const Json::parse_error&) {
      throw ContractError("bertscore reply is not JSON");
    }
    if (!body.is_object() || !body.contains("scores") || !body["scores"].is_array()) {
      throw ContractError("bertscore reply lacks a 'scores' array");
    }
    const Json& scores = body["scores"];
    if (scores.size() != end - start) {
      throw ContractError("bertscore reply has " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(end - start) + " pairs");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!scores[i].is_object()) throw ContractError("bertscore score is not an object");
      out.scores.push_back({unit_value(scores[i], "P", start + i),
                            unit_value(scores[i], "R", start + i),
                            unit_value(scores[i], "F", start + i)});
    }
    if (auto it = body.find("model_tag"); it != body.end() && it->is_string()) {
      out.model_tag = it->get<std::string>();
    }
  }
  if (out.model_tag.empty()) out.model_tag = options_.model_tag;
  return out;
}

std::optional<ServiceHealth> BertScoreClient::health() const {
  if (base_url_.empty()) return std::nullopt;
  HttpResponse res;
  try {
    res = http_get(join_url(base_url_, "/health"), options_.timeout);
  } catch (const TransportError&) {
    return std::nullopt;
  }
  ServiceHealth h;
  h.http_status = res.status;
  const Json body = Json::parse(res.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_object()) {
    if (auto it = body.find("status"); it != body.end() && it->is_string()) {
      h.status = it->get<std::string>();
    }
    if (auto it = body.find("model_tag"); it != body.end() && it->is_string()) {
      h.model_tag = it->get<std::string>();
    }
  }
  return h;
}

}  // namespace alliance
