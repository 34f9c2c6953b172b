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

// Client for the embedding service.
//
//   POST /bertscore  {"candidates": [...], "references": [...],
//                     "options": {"idf": false, "model_tag": "..."}}
//     200 -> {"model_tag": "...", "scores": [{"P": .., "R": .., "F": ..}]}
//     400 on empty or mismatched lists, 503 while the model loads.
//   GET /health -> {"status": "...", "model_tag": "..."}
//
// An unreachable or loading service yields an unavailable result; scores
// are never synthesised locally.

#ifndef ALLIANCE_BERTSCORE_CLIENT_HPP_
#define ALLIANCE_BERTSCORE_CLIENT_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace alliance {

struct BertScoreOptions {
  bool idf = false;
  std::string model_tag;  // empty lets the service use its configured tag
  int batch_size = 64;
  std::chrono::milliseconds timeout{std::chrono::seconds(60)};
};

struct BertScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct BertScoreResult {
  bool available = false;
  std::string model_tag;
  std::vector<BertScoreTriple> scores;
  std::string unavailable_reason;
};

struct ServiceHealth {
  int http_status = 0;
  std::string status;
  std::string model_tag;
  bool ready() const { return http_status == 200; }
};

class BertScoreClient {
 public:
  // `base_url` like "http://localhost:8100"; empty means no service.
  explicit BertScoreClient(std::string base_url, BertScoreOptions options = {});

  // Throws ContractError when the inputs differ in length or a reply breaks
  // the contract, TransportError on an unexpected HTTP status.
  BertScoreResult score(const std::vector<std::string>& candidates,
                        const std::vector<std::string>& references) const;

  // nullopt when the service cannot be reached.
  std::optional<ServiceHealth> health() const;

  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  BertScoreOptions options_;
};

}  // namespace alliance

#endif  // ALLIANCE_BERTSCORE_CLIENT_HPP_
