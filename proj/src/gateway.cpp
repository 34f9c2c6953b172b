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

#include "alliance/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "alliance/http_transport.hpp"

namespace alliance {

Json chat_request_to_json(const ChatRequest& req) {
  Json j;
  j["model"] = req.model;
  Json msgs = Json::array();
  for (const auto& m : req.messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  j["messages"] = std::move(msgs);
  j["temperature"] = req.temperature;
  j["top_p"] = req.top_p;
  return j;
}

HttpChatTransport::HttpChatTransport(std::string base_url, std::string api_key,
                                     std::chrono::milliseconds timeout)
    : url_(join_url(base_url, "/chat/completions")),
      api_key_(std::move(api_key)),
      timeout_(timeout) {}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  HttpHeaders headers;
  if (!api_key_.empty()) headers.emplace_back("Authorization", "Bearer " + api_key_);
  const auto res =
      http_post_json(url_, dump_line(chat_request_to_json(request)), headers, timeout_);
  if (res.status == 429 || res.status >= 500) {
    throw TransportError("endpoint returned HTTP " + std::to_string(res.status),
                         /*transient=*/true, res.status);
  }
  if (res.status != 200) {
    throw TransportError("endpoint returned HTTP " + std::to_string(res.status) +
                             ": " + res.body.substr(0, 200),
                         /*transient=*/false, res.status);
  }
  const auto body = Json::parse(res.body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("choices") ||
      !body["choices"].is_array() || body["choices"].empty()) {
    throw TransportError("malformed chat-completion body", false, res.status);
  }
  const Json& choice = body["choices"][0];
  if (!choice.is_object() || !choice.contains("message") ||
      !choice["message"].is_object() || !choice["message"].contains("content") ||
      !choice["message"]["content"].is_string()) {
    throw TransportError("chat-completion body lacks message content", false,
                         res.status);
  }
  return choice["message"]["content"].get<std::string>();
}

MockChatTransport::MockChatTransport(Responder responder)
    : responder_(std::move(responder)) {}

std::unique_ptr<MockChatTransport> MockChatTransport::from_fixture(
    const Json& fixture) {
  auto mock = std::make_unique<MockChatTransport>();
  if (!fixture.is_object()) throw ConfigError("mock fixture must be an object");
  try {
    if (fixture.contains("rules")) {
      for (const auto& r : fixture.at("rules")) {
        Rule rule;
        if (r.contains("tag")) rule.tag = require_string(r, "tag");
        if (r.contains("contains")) rule.contains = require_string(r, "contains");
        rule.response = require_string(r, "response");
        if (r.contains("status")) rule.status = static_cast<int>(require_int(r, "status"));
        if (r.contains("fail_times")) {
          rule.fail_times = static_cast<int>(require_int(r, "fail_times"));
        }
        mock->add_rule(std::move(rule));
      }
    }
    if (fixture.contains("default")) {
      const Json& d = fixture.at("default");
      mock->set_default(require_string(d, "response"),
                        d.contains("status") ? static_cast<int>(require_int(d, "status"))
                                             : 200);
    }
  } catch (const ParseError& e) {
    throw ConfigError(std::string("mock fixture: ") + e.what());
  }
  return mock;
}

void MockChatTransport::add_rule(Rule rule) {
  std::lock_guard lock(mu_);
  rules_.push_back(std::move(rule));
  failures_served_.push_back(0);
}

void MockChatTransport::set_default(std::string response, int status) {
  std::lock_guard lock(mu_);
  Rule r;
  r.response = std::move(response);
  r.status = status;
  default_ = std::move(r);
}

std::string MockChatTransport::complete(const ChatRequest& request) {
  Responder responder;
  {
    std::lock_guard lock(mu_);
    log_.push_back(request);
    const std::string& prompt =
        request.messages.empty() ? std::string() : request.messages.back().content;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const Rule& r = rules_[i];
      const bool match = (r.tag && *r.tag == request.tag) ||
                         (r.contains && prompt.find(*r.contains) != std::string::npos);
      if (!match) continue;
      if (failures_served_[i] < r.fail_times) {
        ++failures_served_[i];
        throw TransportError("mock: injected HTTP 503", true, 503);
      }
      if (r.status != 200) {
        throw TransportError("mock: HTTP " + std::to_string(r.status),
                             r.status == 429 || r.status >= 500, r.status);
      }
      return r.response;
    }
    responder = responder_;
    if (!responder && default_) {
      if (default_->status != 200) {
        throw TransportError("mock: HTTP " + std::to_string(default_->status),
                             default_->status == 429 || default_->status >= 500,
                             default_->status);
      }
      return default_->response;
    }
  }
  if (!responder) {
    throw TransportError("mock: no canned response for request '" + request.tag + "'",
                         false, 404);
  }
  return responder(request);
}

std::size_t MockChatTransport::calls() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<ChatRequest> MockChatTransport::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

void EndpointConfig::validate() const {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (!(nucleus > 0.0 && nucleus <= 1.0)) {
    throw ConfigError("nucleus (top_p) must lie in (0, 1]");
  }
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (requests_per_second < 0.0) {
    throw ConfigError("requests_per_second must be >= 0");
  }
}

PredictionError::PredictionError(Kind kind, std::string session_id,
                                 std::string item_id, std::string raw_response,
                                 const std::string& what)
    : Error(session_id + "/" + item_id + ": " + what),
      kind_(kind),
      session_id_(std::move(session_id)),
      item_id_(std::move(item_id)),
      raw_response_(std::move(raw_response)) {}

namespace {

std::string partial_message(const std::vector<PredictionError>& failures) {
  std::string msg = std::to_string(failures.size()) + " item(s) failed:";
  for (const auto& f : failures) msg += " " + f.item_id();
  return msg;
}

}  // namespace

PartialResultError::PartialResultError(std::vector<PredictionRecord> completed,
                                       std::vector<PredictionError> failures)
    : Error(partial_message(failures)),
      completed_(std::move(completed)),
      failures_(std::move(failures)) {}

std::vector<std::string> PartialResultError::failed_item_ids() const {
  std::vector<std::string> ids;
  for (const auto& f : failures_) ids.push_back(f.item_id());
  return ids;
}

TokenBucket::TokenBucket(double rate_per_second, double burst)
    : rate_(rate_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(std::chrono::steady_clock::now()) {}

void TokenBucket::acquire() {
  for (;;) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      tokens_ = std::min(burst_, tokens_ + rate_ * std::chrono::duration<double>(
                                                       now - last_).count());
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

Gateway::Gateway(std::shared_ptr<ChatTransport> transport, EndpointConfig cfg,
                 PromptSpec spec)
    : transport_(std::move(transport)), cfg_(std::move(cfg)), spec_(std::move(spec)) {
  cfg_.validate();
  if (!transport_) throw ConfigError("gateway needs a transport");
  if (cfg_.requests_per_second > 0.0) {
    bucket_ = std::make_unique<TokenBucket>(cfg_.requests_per_second,
                                            cfg_.max_in_flight);
  }
}

std::string Gateway::send(const std::string& prompt, const std::string& tag) {
  ChatRequest req;
  req.model = cfg_.model_id;
  req.messages.push_back({"user", prompt});
  req.temperature = cfg_.temperature;
  req.top_p = cfg_.nucleus;
  req.tag = tag;

  for (int attempt = 0;; ++attempt) {
    if (bucket_) bucket_->acquire();
    {
      std::unique_lock lock(slots_mu_);
      slots_cv_.wait(lock, [&] { return in_flight_ < cfg_.max_in_flight; });
      ++in_flight_;
    }
    struct Release {
      Gateway* g;
      ~Release() {
        {
          std::lock_guard lock(g->slots_mu_);
          --g->in_flight_;
        }
        g->slots_cv_.notify_one();
      }
    };
    try {
      Release release{this};
      return transport_->complete(req);
    } catch (const TransportError& e) {
      if (!e.transient() || attempt >= cfg_.max_retries) throw;
    }
    if (!cfg_.backoff.empty()) {
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(attempt),
                                             cfg_.backoff.size() - 1);
      std::this_thread::sleep_for(cfg_.backoff[idx]);
    }
  }
}

PredictionRecord Gateway::predict_item(const Session& session, const WaiItem& item) {
  const std::string prompt = build_prompt(session, item, spec_);
  std::string raw;
  try {
    raw = send(prompt, session.session_id + "/" + item.item_id);
  } catch (const TransportError& e) {
    throw PredictionError(PredictionError::Kind::kTransport, session.session_id,
                          item.item_id, "", e.what());
  }
  const ParsedVerdict v = parse_verdict(raw, cfg_.require_rationale);
  if (v.status == ParseStatus::kOutOfRange) {
    throw PredictionError(PredictionError::Kind::kRange, session.session_id,
                          item.item_id, raw, v.detail);
  }
  if (!v.ok()) {
    throw PredictionError(PredictionError::Kind::kParse, session.session_id,
                          item.item_id, raw, v.detail);
  }
  PredictionRecord rec;
  rec.session_id = session.session_id;
  rec.item_id = item.item_id;
  rec.score = *v.score;
  rec.rationale = v.rationale;
  rec.model_id = cfg_.model_id;
  rec.raw_response = std::move(raw);
  rec.decode = {cfg_.temperature, cfg_.nucleus};
  return rec;
}

std::vector<PredictionRecord> Gateway::predict_session(const Session& session,
                                                       const WaiInventory& inv) {
  const auto& items = inv.items();
  std::vector<std::optional<PredictionRecord>> results(items.size());
  std::vector<std::optional<PredictionError>> errors(items.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        results[i] = predict_item(session, items[i]);
      } catch (const PredictionError& e) {
        errors[i] = e;
      } catch (const std::exception& e) {
        errors[i] = PredictionError(PredictionError::Kind::kTransport,
                                    session.session_id, items[i].item_id, "",
                                    e.what());
      }
    }
  };
  const auto n_workers = std::min<std::size_t>(
      static_cast<std::size_t>(cfg_.max_in_flight), items.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  std::vector<PredictionRecord> out;
  std::vector<PredictionError> failures;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (results[i]) out.push_back(std::move(*results[i]));
    if (errors[i]) failures.push_back(std::move(*errors[i]));
  }
  if (!failures.empty()) {
    throw PartialResultError(std::move(out), std::move(failures));
  }
  return out;
}

std::string Gateway::draft_rationale(const Session& session, const WaiItem& item,
                                     int true_score) {
  const std::string prompt = build_draft_prompt(session, item, true_score, spec_);
  try {
    return send(prompt, session.session_id + "/" + item.item_id);
  } catch (const TransportError& e) {
    throw PredictionError(PredictionError::Kind::kTransport, session.session_id,
                          item.item_id, "", e.what());
  }
}

std::shared_ptr<ChatTransport> make_http_transport(const EndpointConfig& cfg) {
  std::string key;
  if (!cfg.api_key_env.empty()) {
    if (const char* v = std::getenv(cfg.api_key_env.c_str())) key = v;
  }
  return std::make_shared<HttpChatTransport>(cfg.base_url, std::move(key));
}

}  // namespace alliance
