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


#include <atomic>
#include <mutex>
#include <thread>

#include "alliance/bertscore_client.hpp"
#include "alliance/rationale_metrics.hpp"
#include "doctest.h"
#include "httplib.h"
#include "support.hpp"

using namespace alliance;
using namespace std::chrono_literals;

namespace {

// Stand-in scoring service: answers every pair with fixed P/R/F unless a
// custom handler is installed.
class FakeScorer {
 public:
  FakeScorer() {
    server_.Post("/bertscore", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      ++posts_;
      bodies_.push_back(Json::parse(req.body));
      if (handler_) {
        handler_(req, res);
        return;
      }
      const auto& j = bodies_.back();
      Json scores = Json::array();
      for (std::size_t i = 0; i < j["candidates"].size(); ++i) {
        scores.push_back({{"P", 0.83}, {"R", 0.79}, {"F", 0.81}});
      }
      res.set_content(dump_line({{"model_tag", "bert-base-chinese"}, {"scores", scores}}),
                      "application/json");
    });
    server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu_);
      res.status = ready_ ? 200 : 503;
      res.set_content(dump_line({{"status", ready_ ? "ready" : "loading"},
                                 {"model_tag", "bert-base-chinese"}}),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeScorer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  void set_handler(std::function<void(const httplib::Request&, httplib::Response&)> h) {
    std::lock_guard lock(mu_);
    handler_ = std::move(h);
  }
  void set_ready(bool r) {
    std::lock_guard lock(mu_);
    ready_ = r;
  }
  int posts() {
    std::lock_guard lock(mu_);
    return posts_;
  }
  Json body(std::size_t i) {
    std::lock_guard lock(mu_);
    return bodies_.at(i);
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::function<void(const httplib::Request&, httplib::Response&)> handler_;
  std::vector<Json> bodies_;
  int posts_ = 0;
  bool ready_ = true;
};

}  // namespace

TEST_SUITE("bertscore_client") {

TEST_CASE("scores pass through unmodified") {
  FakeScorer svc;
  BertScoreClient client(svc.url());
  const auto r = client.score({"来访者认同目标", "b"}, {"来访者认可目标", "c"});
  REQUIRE(r.available);
  REQUIRE(r.scores.size() == 2);
  CHECK(r.scores[0].f1 == 0.81);
  CHECK(r.scores[0].precision == 0.83);
  CHECK(r.scores[1].recall == 0.79);
  CHECK(r.model_tag == "bert-base-chinese");
  const Json sent = svc.body(0);
  CHECK(sent["candidates"][0] == "来访者认同目标");
  CHECK(sent["references"][1] == "c");
  CHECK(sent["options"]["idf"] == false);
}

TEST_CASE("requests are batched") {
  FakeScorer svc;
  BertScoreOptions opts;
  opts.batch_size = 3;
  opts.idf = true;
  opts.model_tag = "tag-x";
  BertScoreClient client(svc.url(), opts);
  std::vector<std::string> c(7, "x"), r(7, "y");
  const auto res = client.score(c, r);
  CHECK(res.scores.size() == 7);
  CHECK(svc.posts() == 3);
  CHECK(svc.body(2)["candidates"].size() == 1);
  CHECK(svc.body(0)["options"]["idf"] == true);
  CHECK(svc.body(0)["options"]["model_tag"] == "tag-x");
}

TEST_CASE("mismatched lists are a contract error") {
  BertScoreClient client("");
  CHECK_THROWS_AS(client.score({"a", "b"}, {"a"}), ContractError);
}

TEST_CASE("an absent or loading service is reported unavailable") {
  BertScoreOptions opts;
  opts.timeout = 500ms;
  const auto down = BertScoreClient("http://127.0.0.1:1", opts).score({"a"}, {"b"});
  CHECK_FALSE(down.available);
  CHECK(down.scores.empty());
  CHECK_FALSE(down.unavailable_reason.empty());
  CHECK_FALSE(BertScoreClient("").score({"a"}, {"b"}).available);
  CHECK_FALSE(BertScoreClient("http://127.0.0.1:1", opts).health().has_value());

  FakeScorer svc;
  svc.set_handler([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  CHECK_FALSE(BertScoreClient(svc.url()).score({"a"}, {"b"}).available);
}

TEST_CASE("health reflects the service state") {
  FakeScorer svc;
  BertScoreClient client(svc.url());
  svc.set_ready(false);
  auto h = client.health();
  REQUIRE(h.has_value());
  CHECK_FALSE(h->ready());
  CHECK(h->status == "loading");
  svc.set_ready(true);
  h = client.health();
  CHECK(h->ready());
  CHECK(h->model_tag == "bert-base-chinese");
}

TEST_CASE("contract violations in replies are rejected") {
  FakeScorer svc;
  BertScoreClient client(svc.url());
  SUBCASE("wrong count") {
    svc.set_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": []})", "application/json");
    });
    CHECK_THROWS_AS(client.score({"a"}, {"b"}), ContractError);
  }
  SUBCASE("missing field") {
    svc.set_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": [{"P": 0.5, "R": 0.5}]})", "application/json");
    });
    CHECK_THROWS_AS(client.score({"a"}, {"b"}), ContractError);
  }
  SUBCASE("out of range") {
    svc.set_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": [{"P": 0.5, "R": 0.5, "F": 1.2}]})", "application/json");
    });
    CHECK_THROWS_AS(client.score({"a"}, {"b"}), ContractError);
  }
  SUBCASE("not json") {
    svc.set_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_content("oops", "text/plain");
    });
    CHECK_THROWS_AS(client.score({"a"}, {"b"}), ContractError);
  }
  SUBCASE("bad request") {
    svc.set_handler([](const httplib::Request&, httplib::Response& res) { res.status = 400; });
    CHECK_THROWS_AS(client.score({"a"}, {"b"}), TransportError);
  }
}

TEST_CASE("corpus reports carry service scores when available") {
  FakeScorer svc;
  BertScoreClient client(svc.url());
  std::vector<RationaleRef> refs = {{"s1", "goal_1", "来访者认同目标"},
                                    {"s1", "bond_1", "咨询师表达支持"}};
  std::vector<PredictionRecord> preds;
  for (const auto& r : refs) {
    PredictionRecord p;
    p.session_id = r.session_id;
    p.item_id = r.item_id;
    p.score = 4;
    p.rationale = r.reference_rationale;
    preds.push_back(p);
  }
  ScoreCorpusOptions opts;
  opts.bertscore = &client;
  const auto rep = score_corpus(preds, refs, placeholder_inventory(), Tokenizer(), opts);
  CHECK(rep.bertscore_available);
  CHECK(rep.bertscore_model_tag == "bert-base-chinese");
  CHECK(*rep.dimensions[0].bertscore.mean == doctest::Approx(0.81));
  for (const auto& p : rep.pairs) CHECK(*p.score.bertscore_f == 0.81);

  BertScoreClient none("");
  opts.bertscore = &none;
  const auto off = score_corpus(preds, refs, placeholder_inventory(), Tokenizer(), opts);
  CHECK_FALSE(off.bertscore_available);
  CHECK_FALSE(off.bertscore_note.empty());
  for (const auto& p : off.pairs) CHECK_FALSE(p.score.bertscore_f.has_value());
  CHECK(render_rationale_table(off).find("n/a") != std::string::npos);
}

}  // TEST_SUITE
