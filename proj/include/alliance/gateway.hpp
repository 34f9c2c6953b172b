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

// Chat-completion gateway: sends one prompt per (session, item), retries
// transient failures with backoff, bounds in-flight requests and parses the
// verdict. Transports are pluggable; the HTTP one speaks the
// OpenAI-compatible /chat/completions body.

#ifndef ALLIANCE_GATEWAY_HPP_
#define ALLIANCE_GATEWAY_HPP_

#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "alliance/domain.hpp"
#include "alliance/json_io.hpp"
#include "alliance/prompt.hpp"
#include "alliance/response_parser.hpp"

namespace alliance {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  double top_p = 1.0;
  // "session_id/item_id"; local bookkeeping only, never sent on the wire.
  std::string tag;
};

// {"model","messages":[{"role","content"}],"temperature","top_p"}
Json chat_request_to_json(const ChatRequest& req);

// Returns the assistant message text verbatim. Throws TransportError.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

class HttpChatTransport : public ChatTransport {
 public:
  // `base_url` such as "http://localhost:8000/v1"; requests go to
  // base_url + "/chat/completions".
  HttpChatTransport(std::string base_url, std::string api_key,
                    std::chrono::milliseconds timeout = std::chrono::seconds(120));
  std::string complete(const ChatRequest& request) override;

 private:
  std::string url_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// Canned responses for offline runs and tests.
//
// Fixture file:
//   {"rules": [{"tag": "s00001/goal_1" | "contains": "substring",
//               "response": "...", "status": 200, "fail_times": 0}, ...],
//    "default": {"response": "...", "status": 200}}
// The first rule whose tag equals the request tag, or whose substring
// occurs in the last message, answers. A non-200 status raises a
// TransportError (transient for 429/5xx); "fail_times" makes a rule fail
// with 503 that many times before answering.
class MockChatTransport : public ChatTransport {
 public:
  struct Rule {
    std::optional<std::string> tag;
    std::optional<std::string> contains;
    std::string response;
    int status = 200;
    int fail_times = 0;
  };
  using Responder = std::function<std::string(const ChatRequest&)>;

  MockChatTransport() = default;
  explicit MockChatTransport(Responder responder);
  static std::unique_ptr<MockChatTransport> from_fixture(const Json& fixture);

  void add_rule(Rule rule);
  void set_default(std::string response, int status = 200);

  std::string complete(const ChatRequest& request) override;

  std::size_t calls() const;
  std::vector<ChatRequest> requests() const;

 private:
  mutable std::mutex mu_;
  Responder responder_;
  std::vector<Rule> rules_;
  std::vector<int> failures_served_;
  std::optional<Rule> default_;
  std::vector<ChatRequest> log_;
};

struct EndpointConfig {
  std::string base_url;  // "mock" selects an in-process transport
  std::string model_id = "model";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  double nucleus = 1.0;
  int max_retries = 3;
  std::vector<std::chrono::milliseconds> backoff{
      std::chrono::milliseconds(500), std::chrono::milliseconds(2000),
      std::chrono::milliseconds(8000)};
  int max_in_flight = 4;
  // Token bucket on request starts; 0 disables.
  double requests_per_second = 0.0;
  bool require_rationale = true;

  // Throws ConfigError when temperature < 0, nucleus outside (0, 1],
  // max_in_flight < 1 or max_retries < 0.
  void validate() const;
};

// Failure of one (session, item) request. raw_response is kept for audit
// whenever a reply was received.
class PredictionError : public Error {
 public:
  enum class Kind { kTransport, kParse, kRange };
  PredictionError(Kind kind, std::string session_id, std::string item_id,
                  std::string raw_response, const std::string& what);
  Kind kind() const { return kind_; }
  const std::string& session_id() const { return session_id_; }
  const std::string& item_id() const { return item_id_; }
  const std::string& raw_response() const { return raw_response_; }

 private:
  Kind kind_;
  std::string session_id_;
  std::string item_id_;
  std::string raw_response_;
};

// Some items of a session failed. Successful records are kept in inventory
// order; failures are listed by item id.
class PartialResultError : public Error {
 public:
  PartialResultError(std::vector<PredictionRecord> completed,
                     std::vector<PredictionError> failures);
  const std::vector<PredictionRecord>& completed() const { return completed_; }
  const std::vector<PredictionError>& failures() const { return failures_; }
  std::vector<std::string> failed_item_ids() const;

 private:
  std::vector<PredictionRecord> completed_;
  std::vector<PredictionError> failures_;
};

class TokenBucket {
 public:
  TokenBucket(double rate_per_second, double burst);
  void acquire();

 private:
  std::mutex mu_;
  double rate_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
};

class Gateway {
 public:
  Gateway(std::shared_ptr<ChatTransport> transport, EndpointConfig cfg,
          PromptSpec spec = PromptSpec::defaults());

  PredictionRecord predict_item(const Session& session, const WaiItem& item);
  // One record per inventory item, in inventory order, whatever order the
  // concurrent requests finish in.
  std::vector<PredictionRecord> predict_session(const Session& session,
                                                const WaiInventory& inv);
  std::string draft_rationale(const Session& session, const WaiItem& item,
                              int true_score);

  const EndpointConfig& config() const { return cfg_; }
  const PromptSpec& prompt_spec() const { return spec_; }

 private:
  std::string send(const std::string& prompt, const std::string& tag);

  std::shared_ptr<ChatTransport> transport_;
  EndpointConfig cfg_;
  PromptSpec spec_;
  std::unique_ptr<TokenBucket> bucket_;
  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;
};

// HTTP transport for cfg.base_url, with the API key read from the
// environment variable named by cfg.api_key_env.
std::shared_ptr<ChatTransport> make_http_transport(const EndpointConfig& cfg);

}  // namespace alliance

#endif  // ALLIANCE_GATEWAY_HPP_
