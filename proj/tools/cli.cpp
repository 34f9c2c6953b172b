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

#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "alliance/alliance_metrics.hpp"
#include "alliance/bertscore_client.hpp"
#include "alliance/corpus_io.hpp"
#include "alliance/domain.hpp"
#include "alliance/fold_splitter.hpp"
#include "alliance/gateway.hpp"
#include "alliance/interaction_regression.hpp"
#include "alliance/json_io.hpp"
#include "alliance/lexical_logodds.hpp"
#include "alliance/prompt.hpp"
#include "alliance/rationale_metrics.hpp"
#include "alliance/sft_exporter.hpp"
#include "alliance/synth.hpp"
#include "alliance/tokenizer.hpp"

namespace alliance::cli {
namespace {

namespace fs = std::filesystem;

// Flag combinations CLI11 cannot express; reported like parse errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Records what a run read and wrote; saved as <primary output>.manifest.json.
class Manifest {
 public:
  Manifest(const CLI::App* sub, std::vector<std::string> argv)
      : sub_(sub), argv_(std::move(argv)), started_(utc_now()) {}

  void input(const std::string& role, const fs::path& p) { inputs_[role] = p.string(); }
  void output(const std::string& role, const fs::path& p) { outputs_[role] = p.string(); }
  void seed(std::uint64_t s) { seeds_.push_back(s); }
  void note(const std::string& key, Json value) { notes_[key] = std::move(value); }

  void write(const fs::path& path) const {
    Json j;
    j["subcommand"] = sub_->get_name();
    j["tool_version"] = kToolVersion;
    j["argv"] = argv_;
    Json cfg = Json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      if (opt->get_expected_max() == 0) {
        cfg[name] = opt->count() > 0;
      } else if (opt->count() > 0) {
        const auto& r = opt->results();
        cfg[name] = r.size() == 1 ? Json(r.front()) : Json(r);
      } else {
        cfg[name] = opt->get_default_str();
      }
    }
    j["config"] = std::move(cfg);
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["seeds"] = seeds_;
    if (!notes_.empty()) j["notes"] = notes_;
    j["started_at"] = started_;
    j["finished_at"] = utc_now();
    write_text_file(path, dump_pretty(j) + "\n");
  }

 private:
  const CLI::App* sub_;
  std::vector<std::string> argv_;
  std::string started_;
  Json inputs_ = Json::object();
  Json outputs_ = Json::object();
  std::vector<std::uint64_t> seeds_;
  Json notes_ = Json::object();
};

fs::path manifest_path(const fs::path& out) {
  return fs::path(out.string() + ".manifest.json");
}

struct Common {
  std::string inventory;
  const WaiInventory* inv = nullptr;
  std::optional<WaiInventory> loaded;
};

const WaiInventory& inventory(Common& c) {
  if (c.inv) return *c.inv;
  if (c.inventory.empty()) {
    c.inv = &placeholder_inventory();
  } else {
    c.loaded = load_inventory(c.inventory);
    c.inv = &*c.loaded;
  }
  return *c.inv;
}

FoldPlan load_plan(const std::string& path) {
  return fold_plan_from_json(read_json_file(path));
}

std::vector<std::string> read_lexicon(const std::string& path) {
  std::vector<std::string> words;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty() && line.front() != '#') words.push_back(line);
  }
  return words;
}

Tokenizer make_tokenizer(const std::string& id, const std::string& lexicon_path,
                         const SynthConfig& defaults) {
  if (id != kLexiconGreedy) return Tokenizer(id);
  std::vector<std::string> words;
  if (!lexicon_path.empty()) {
    words = read_lexicon(lexicon_path);
  } else {
    for (const auto& group : defaults.rationale_lexicons) {
      words.insert(words.end(), group.begin(), group.end());
    }
  }
  return Tokenizer(id, std::move(words));
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  SynthConfig cfg;
  std::string out;
  std::string refs_out;
};

int run_synth(SynthArgs& a, Common& c, Manifest& m, std::ostream& out) {
  const auto corpus = synth_corpus(a.cfg, inventory(c));
  write_sessions(corpus.sessions, a.out);
  m.seed(a.cfg.seed);
  m.output("corpus", a.out);
  if (!a.refs_out.empty()) {
    write_rationale_refs(corpus.references, a.refs_out);
    m.output("references", a.refs_out);
  }
  m.write(manifest_path(a.out));
  out << "wrote " << corpus.sessions.size() << " sessions to " << a.out;
  if (!a.refs_out.empty()) out << " and " << corpus.references.size() << " references to " << a.refs_out;
  out << '\n';
  return kExitOk;
}

// ---- validate ------------------------------------------------------------

struct ValidateArgs {
  std::string in;
};

int run_validate(ValidateArgs& a, Common& c, std::ostream& out, std::ostream& err) {
  try {
    const auto sessions = read_sessions(a.in, inventory(c));
    int annotated = 0, rated = 0;
    for (const auto& s : sessions) {
      annotated += s.annotated();
      rated += s.client_item_ratings.has_value();
    }
    out << a.in << ": " << sessions.size() << " valid sessions (" << rated
        << " client-rated, " << annotated << " fully labelled)\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) err << v << '\n';
    err << e.violations().size() << " violation(s)\n";
    return kExitDataError;
  }
}

// ---- split ---------------------------------------------------------------

struct SplitArgs {
  std::string in;
  std::string out;
  int k = 5;
  std::uint64_t seed = 1;
  SplitOptions opts;
  bool strict = false;
};

int run_split(SplitArgs& a, Common& c, Manifest& m, std::ostream& out, std::ostream& err) {
  const auto sessions = read_sessions(a.in, inventory(c));
  const FoldPlan plan = split(sessions, inventory(c), a.k, a.seed, a.opts);

  // Leakage check: each client's sessions fall in exactly one fold.
  std::map<std::string, std::set<int>> folds_by_client;
  for (const auto& s : sessions) folds_by_client[s.client_id].insert(plan.fold_of(s.client_id));
  std::size_t leaking = 0;
  for (const auto& [client, folds] : folds_by_client) leaking += folds.size() != 1;

  write_text_file(a.out, dump_pretty(fold_plan_to_json(plan)) + "\n");
  m.input("corpus", a.in);
  m.output("plan", a.out);
  m.seed(a.seed);
  m.note("max_deviation", plan.max_deviation);
  m.note("within_bound", plan.within_bound());
  m.write(manifest_path(a.out));

  out << render_fold_table(plan);
  out << "leakage check: " << (leaking == 0 ? "pass" : "FAIL") << " ("
      << folds_by_client.size() << " clients)\n";
  if (!plan.within_bound()) {
    err << "warning: max fold-mean deviation " << plan.max_deviation
        << " exceeds epsilon " << plan.epsilon << '\n';
    if (a.strict) return kExitDataError;
  }
  return leaking == 0 ? kExitOk : kExitDataError;
}

// ---- predict -------------------------------------------------------------

struct PredictArgs {
  std::string in;
  std::string plan;
  int fold = -1;
  std::string endpoint = "mock";
  std::string model = "model";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string mock_mode = "truth";
  std::string mock_fixture;
  int mock_score = 3;
  std::string refs;
  int max_in_flight = 4;
  double rps = 0.0;
  int retries = 3;
  std::vector<int> backoff_ms{500, 2000, 8000};
  double temperature = 0.0;
  double nucleus = 1.0;
  std::string language = "zh";
  bool draft = false;
  std::string out;
};

std::string mock_reply(int score, const std::string& rationale) {
  Json j;
  j["rationale"] = rationale;
  j["score"] = score;
  return dump_line(j);
}

std::shared_ptr<ChatTransport> make_transport(const PredictArgs& a,
                                              const std::vector<Session>& sessions,
                                              const std::vector<RationaleRef>& refs,
                                              const EndpointConfig& cfg) {
  if (a.endpoint != "mock") return make_http_transport(cfg);
  if (a.mock_mode == "fixture") {
    if (a.mock_fixture.empty()) throw UsageError("--mock-mode fixture needs --mock-fixture");
    return MockChatTransport::from_fixture(read_json_file(a.mock_fixture));
  }
  auto truth = std::make_shared<std::map<std::string, int>>();
  auto texts = std::make_shared<std::map<std::string, std::string>>();
  for (const auto& s : sessions) {
    if (!s.client_item_ratings) continue;
    for (const auto& [item, score] : *s.client_item_ratings) {
      (*truth)[s.session_id + "/" + item] = score;
    }
  }
  for (const auto& r : refs) (*texts)[r.session_id + "/" + r.item_id] = r.reference_rationale;

  const std::string mode = a.mock_mode;
  const int constant = a.mock_score;
  const bool draft = a.draft;
  return std::make_shared<MockChatTransport>([=](const ChatRequest& req) -> std::string {
    auto it = texts->find(req.tag);
    const std::string rationale =
        it != texts->end() ? it->second : "根据对话中来访者的表述给出评分。";
    if (draft) return rationale;
    if (mode == "constant") return mock_reply(constant, rationale);
    auto t = truth->find(req.tag);
    if (t == truth->end()) {
      throw TransportError("mock has no client rating for " + req.tag, /*transient=*/false);
    }
    return mock_reply(mode == "anti" ? 6 - t->second : t->second, rationale);
  });
}

int run_predict(PredictArgs& a, Common& c, Manifest& m, std::ostream& out,
                std::ostream& err) {
  if (a.fold >= 0 && a.plan.empty()) throw UsageError("--fold needs --plan");
  if (a.endpoint == "mock" && a.mock_mode != "truth" && a.mock_mode != "anti" &&
      a.mock_mode != "constant" && a.mock_mode != "fixture") {
    throw UsageError("--mock-mode must be truth, anti, constant or fixture");
  }
  const WaiInventory& inv = inventory(c);
  auto sessions = read_sessions(a.in, inv);
  m.input("corpus", a.in);
  if (!a.plan.empty()) {
    const FoldPlan plan = load_plan(a.plan);
    m.input("plan", a.plan);
    if (a.fold >= 0) sessions = fold_view(plan, sessions, a.fold).eval;
  }
  std::vector<RationaleRef> refs;
  if (!a.refs.empty()) {
    refs = read_rationale_refs(a.refs);
    m.input("references", a.refs);
  }

  EndpointConfig cfg;
  cfg.base_url = a.endpoint;
  cfg.model_id = a.model;
  cfg.api_key_env = a.api_key_env;
  cfg.temperature = a.temperature;
  cfg.nucleus = a.nucleus;
  cfg.max_retries = a.retries;
  cfg.backoff.clear();
  for (int ms : a.backoff_ms) cfg.backoff.emplace_back(ms);
  cfg.max_in_flight = a.max_in_flight;
  cfg.requests_per_second = a.rps;
  cfg.validate();

  Gateway gateway(make_transport(a, sessions, refs, cfg), cfg,
                  PromptSpec::defaults(parse_language(a.language)));

  std::size_t failures = 0;
  if (a.draft) {
    std::vector<RationaleRef> drafts;
    for (const auto& s : sessions) {
      if (!s.client_item_ratings) {
        throw MissingDataError("draft mode needs client ratings; " + s.session_id + " has none",
                               {s.session_id});
      }
      for (const auto& item : inv.items()) {
        try {
          drafts.push_back({s.session_id, item.item_id,
                            gateway.draft_rationale(s, item,
                                                    s.client_item_ratings->at(item.item_id))});
        } catch (const PredictionError& e) {
          ++failures;
          err << s.session_id << "/" << item.item_id << ": " << e.what() << '\n';
        }
      }
    }
    write_rationale_refs(drafts, a.out);
    out << "wrote " << drafts.size() << " draft rationales to " << a.out << '\n';
  } else {
    std::vector<PredictionRecord> records;
    for (const auto& s : sessions) {
      try {
        auto recs = gateway.predict_session(s, inv);
        records.insert(records.end(), recs.begin(), recs.end());
      } catch (const PartialResultError& e) {
        records.insert(records.end(), e.completed().begin(), e.completed().end());
        for (const auto& f : e.failures()) {
          ++failures;
          err << f.session_id() << "/" << f.item_id() << ": " << f.what();
          if (!f.raw_response().empty()) err << " | raw: " << f.raw_response().substr(0, 200);
          err << '\n';
        }
      }
    }
    write_predictions(records, a.out);
    out << "wrote " << records.size() << " predictions for " << sessions.size()
        << " sessions to " << a.out << '\n';
  }
  m.output(a.draft ? "drafts" : "predictions", a.out);
  m.note("failures", failures);
  m.write(manifest_path(a.out));
  if (failures > 0) {
    err << failures << " item request(s) failed\n";
    return kExitDataError;
  }
  return kExitOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string in;
  std::string plan;
  std::string pred;
  std::string out;
  bool with_counselor = false;
  std::string cohort;
  int min_sessions = 1;
};

int run_eval(EvalArgs& a, Common& c, Manifest& m, std::ostream& out) {
  const WaiInventory& inv = inventory(c);
  const auto sessions = read_sessions(a.in, inv);
  const FoldPlan plan = load_plan(a.plan);
  const auto preds = read_predictions(a.pred);
  EvalReport report = evaluate_folds(plan, preds, sessions, inv);
  if (a.with_counselor) report.counselor_baseline = evaluate_counselor_ratings(sessions, inv);

  Json j = eval_report_to_json(report);
  if (!a.cohort.empty()) {
    if (a.cohort != "counselor" && a.cohort != "client") {
      throw UsageError("--cohort must be counselor or client");
    }
    std::vector<GroupedScores> rows;
    for (const auto& row : score_sessions(sessions, preds, inv)) {
      GroupedScores g{a.cohort == "counselor" ? row.counselor_id : row.client_id, {}};
      for (Dimension d : kDimensions) g.scores[index_of(d)] = row.predicted[index_of(d)].value();
      rows.push_back(std::move(g));
    }
    j["cohort"] = cohort_profile_to_json(cohort_profile(rows, a.min_sessions));
    j["cohort"]["by"] = a.cohort;
  }
  write_text_file(a.out, dump_pretty(j) + "\n");
  m.input("corpus", a.in);
  m.input("plan", a.plan);
  m.input("predictions", a.pred);
  m.output("report", a.out);
  m.write(manifest_path(a.out));
  out << render_comparison_table({report});
  return kExitOk;
}

// ---- rationale-eval ------------------------------------------------------

struct RationaleArgs {
  std::string pred;
  std::string refs;
  std::string in;
  std::string plan;
  std::string tokenizer = std::string(kCharCjk);
  std::string lexicon;
  std::string smoothing = "none";
  double epsilon = 0.1;
  std::string bertscore_url;
  bool idf = false;
  std::string model_tag;
  bool pairs = false;
  std::string rubric_out;
  std::string out;
};

int run_rationale(RationaleArgs& a, Common& c, Manifest& m, std::ostream& out,
                  std::ostream& err) {
  if (a.plan.empty() != a.in.empty()) throw UsageError("--plan and --in go together");
  if (a.smoothing != "none" && a.smoothing != "add-epsilon") {
    throw UsageError("--smoothing must be none or add-epsilon");
  }
  const WaiInventory& inv = inventory(c);
  const auto preds = read_predictions(a.pred);
  const auto refs = read_rationale_refs(a.refs);
  m.input("predictions", a.pred);
  m.input("references", a.refs);

  ScoreCorpusOptions opts;
  opts.bleu.smoothing =
      a.smoothing == "none" ? BleuSmoothing::kNone : BleuSmoothing::kAddEpsilon;
  opts.bleu.epsilon = a.epsilon;
  std::vector<Session> sessions;
  FoldPlan plan;
  if (!a.plan.empty()) {
    sessions = read_sessions(a.in, inv);
    plan = load_plan(a.plan);
    opts.plan = &plan;
    opts.sessions = &sessions;
    m.input("corpus", a.in);
    m.input("plan", a.plan);
  }
  std::optional<BertScoreClient> bs;
  if (!a.bertscore_url.empty()) {
    BertScoreOptions bo;
    bo.idf = a.idf;
    bo.model_tag = a.model_tag;
    bs.emplace(a.bertscore_url, bo);
  }
  BertScoreClient offline("");
  opts.bertscore = bs ? &*bs : &offline;

  const RationaleReport report =
      score_corpus(preds, refs, inv, make_tokenizer(a.tokenizer, a.lexicon, {}), opts);
  write_text_file(a.out, dump_pretty(rationale_report_to_json(report, a.pairs)) + "\n");
  m.output("report", a.out);
  if (!a.rubric_out.empty()) {
    write_text_file(a.rubric_out, dump_pretty(human_rubric_template(preds, inv)) + "\n");
    m.output("rubric", a.rubric_out);
  }
  m.write(manifest_path(a.out));
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  out << render_rationale_table(report);
  return kExitOk;
}

// ---- lexical -------------------------------------------------------------

struct LexicalArgs {
  std::string refs;
  std::string tokenizer = std::string(kCharCjk);
  std::string lexicon;
  KeywordOptions opts;
  std::string out;
};

int run_lexical(LexicalArgs& a, Common& c, Manifest& m, std::ostream& out) {
  const auto refs = read_rationale_refs(a.refs);
  const auto report =
      lexical_report(refs, inventory(c), make_tokenizer(a.tokenizer, a.lexicon, {}), a.opts);
  write_text_file(a.out, dump_pretty(lexical_report_to_json(report)) + "\n");
  m.input("references", a.refs);
  m.output("report", a.out);
  m.write(manifest_path(a.out));
  out << render_lexical_table(report);
  return kExitOk;
}

// ---- regress -------------------------------------------------------------

struct RegressArgs {
  std::string in;
  std::string mode = "proportion";
  std::vector<std::string> patterns;
  std::string out;
};

int run_regress(RegressArgs& a, Common& c, Manifest& m, std::ostream& out,
                std::ostream& err) {
  if (a.mode != "proportion" && a.mode != "count") {
    throw UsageError("--features must be proportion or count");
  }
  std::optional<std::vector<Pattern>> vocab;
  if (!a.patterns.empty()) {
    vocab.emplace();
    for (const auto& p : a.patterns) {
      const auto colon = p.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == p.size()) {
        throw UsageError("--pattern expects STRATEGY:REACTION, got '" + p + "'");
      }
      vocab->push_back({p.substr(0, colon), p.substr(colon + 1)});
    }
  }
  const WaiInventory& inv = inventory(c);
  const auto sessions = read_sessions(a.in, inv);
  const auto report = interaction_report(
      sessions, inv, vocab,
      a.mode == "proportion" ? FeatureMode::kProportion : FeatureMode::kRawCount);
  write_text_file(a.out, dump_pretty(interaction_report_to_json(report)) + "\n");
  m.input("corpus", a.in);
  m.output("report", a.out);
  m.write(manifest_path(a.out));
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  out << render_interaction_table(report);
  return kExitOk;
}

// ---- export-sft ----------------------------------------------------------

struct ExportArgs {
  std::string in;
  std::string refs;
  std::string plan;
  int fold = 0;
  std::string variant = "rationale";
  bool chat = false;
  std::string language = "zh";
  std::vector<std::string> overrides;
  std::string out_dir;
};

int run_export(ExportArgs& a, Common& c, Manifest& m, std::ostream& out) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& o : a.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--set expects KEY=VALUE, got '" + o + "'");
    }
    kv.emplace_back(o.substr(0, eq), o.substr(eq + 1));
  }
  const ResolvedTrainConfig train_cfg = resolve_train_config(kv);

  const WaiInventory& inv = inventory(c);
  const auto sessions = read_sessions(a.in, inv);
  const FoldPlan plan = load_plan(a.plan);
  std::vector<RationaleRef> refs;
  SftExportOptions opts;
  opts.variant = parse_sft_variant(a.variant);
  opts.chat_format = a.chat;
  opts.spec = PromptSpec::defaults(parse_language(a.language));
  if (opts.variant == SftVariant::kRationale) {
    if (a.refs.empty()) throw UsageError("the rationale variant needs --refs");
    refs = read_rationale_refs(a.refs);
    m.input("references", a.refs);
  }
  const auto res = export_sft(sessions, refs, inv, plan, a.fold, a.out_dir, opts);
  const fs::path cfg_path = fs::path(a.out_dir) / "train_config.yaml";
  write_text_file(cfg_path, render_train_config(train_cfg));

  m.input("corpus", a.in);
  m.input("plan", a.plan);
  m.output("train", res.train_path);
  m.output("eval", res.eval_path);
  m.output("train_config", cfg_path);
  m.note("train_records", res.train_records);
  m.note("eval_records", res.eval_records);
  m.note("train_config_overrides", train_cfg.overrides);
  m.write(fs::path(a.out_dir) / "manifest.json");
  out << "fold " << a.fold << ": " << res.train_records << " train / " << res.eval_records
      << " eval records (" << to_string(opts.variant) << ") in " << a.out_dir << '\n';
  for (const auto& o : train_cfg.overrides) out << "override " << o << '\n';
  return kExitOk;
}

// ---- report --------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> evals;
  std::string out;
};

int run_report(ReportArgs& a, Manifest& m, std::ostream& out) {
  std::vector<EvalReport> reports;
  for (const auto& path : a.evals) {
    reports.push_back(eval_report_from_json(read_json_file(path)));
    m.input("eval:" + path, path);
  }
  const std::string table = render_comparison_table(reports);
  if (!a.out.empty()) {
    write_text_file(a.out, table);
    m.output("table", a.out);
    m.write(manifest_path(a.out));
  }
  out << table;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Therapeutic-alliance evaluation harness", "alliance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "TOML file with option values ([subcommand] tables)");

  Common common;
  app.add_option("--inventory", common.inventory,
                 "Inventory JSON (default: bundled placeholder wording)");

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus");
  s_synth->add_option("--seed", synth.cfg.seed, "RNG seed")->capture_default_str();
  s_synth->add_option("--clients", synth.cfg.n_clients, "Number of clients")
      ->capture_default_str()->check(CLI::PositiveNumber);
  s_synth->add_option("--sessions-min", synth.cfg.sessions_per_client.min)->capture_default_str();
  s_synth->add_option("--sessions-max", synth.cfg.sessions_per_client.max)->capture_default_str();
  s_synth->add_option("--counselors", synth.cfg.n_counselors)->capture_default_str();
  s_synth->add_option("--annotate-fraction", synth.cfg.annotate_fraction)
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  s_synth->add_option("--counselor-rating-fraction", synth.cfg.counselor_rating_fraction)
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  s_synth->add_option("--folds", synth.cfg.fold_count, "Fold count the corpus must support")
      ->capture_default_str();
  s_synth->add_option("--out", synth.out, "Sessions JSONL")->required();
  s_synth->add_option("--refs-out", synth.refs_out, "Reference rationales JSONL");

  ValidateArgs validate;
  auto* s_validate = app.add_subcommand("validate", "Check a sessions file against the schema");
  s_validate->add_option("--in", validate.in, "Sessions JSONL")->required()->check(CLI::ExistingFile);

  SplitArgs split_args;
  auto* s_split = app.add_subcommand("split", "Client-grouped stratified k-fold plan");
  s_split->add_option("--in", split_args.in)->required()->check(CLI::ExistingFile);
  s_split->add_option("--out", split_args.out, "Plan JSON")->required();
  s_split->add_option("--k", split_args.k)->capture_default_str()->check(CLI::Range(2, 1000));
  s_split->add_option("--seed", split_args.seed)->capture_default_str();
  s_split->add_option("--epsilon", split_args.opts.epsilon)->capture_default_str();
  s_split->add_option("--candidates", split_args.opts.candidate_pool)
      ->capture_default_str()->check(CLI::PositiveNumber);
  s_split->add_option("--size-penalty", split_args.opts.size_penalty)->capture_default_str();
  s_split->add_flag("--strict", split_args.strict, "Fail when the deviation bound is exceeded");

  PredictArgs predict;
  auto* s_predict = app.add_subcommand("predict", "Score sessions with a chat model");
  s_predict->add_option("--in", predict.in)->required()->check(CLI::ExistingFile);
  s_predict->add_option("--plan", predict.plan)->check(CLI::ExistingFile);
  s_predict->add_option("--fold", predict.fold, "Only this fold's eval sessions");
  s_predict->add_option("--endpoint", predict.endpoint, "Base URL or 'mock'")->capture_default_str();
  s_predict->add_option("--model", predict.model)->capture_default_str();
  s_predict->add_option("--api-key-env", predict.api_key_env)->capture_default_str();
  s_predict->add_option("--mock-mode", predict.mock_mode, "truth | anti | constant | fixture")
      ->capture_default_str();
  s_predict->add_option("--mock-fixture", predict.mock_fixture)->check(CLI::ExistingFile);
  s_predict->add_option("--mock-score", predict.mock_score)->capture_default_str()->check(CLI::Range(1, 5));
  s_predict->add_option("--refs", predict.refs, "References echoed as rationales by the mock")
      ->check(CLI::ExistingFile);
  s_predict->add_option("--max-in-flight", predict.max_in_flight)->capture_default_str();
  s_predict->add_option("--rps", predict.rps, "Request rate limit (0 = off)")->capture_default_str();
  s_predict->add_option("--retries", predict.retries)->capture_default_str();
  s_predict->add_option("--backoff-ms", predict.backoff_ms)->capture_default_str();
  s_predict->add_option("--temperature", predict.temperature)->capture_default_str();
  s_predict->add_option("--nucleus", predict.nucleus)->capture_default_str();
  s_predict->add_option("--language", predict.language, "zh | en")->capture_default_str();
  s_predict->add_flag("--draft", predict.draft, "Draft rationales for the known client ratings");
  s_predict->add_option("--out", predict.out)->required();

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Per-fold agreement with client ratings");
  s_eval->add_option("--in", eval.in)->required()->check(CLI::ExistingFile);
  s_eval->add_option("--plan", eval.plan)->required()->check(CLI::ExistingFile);
  s_eval->add_option("--pred", eval.pred)->required()->check(CLI::ExistingFile);
  s_eval->add_option("--out", eval.out)->required();
  s_eval->add_flag("--with-counselor", eval.with_counselor, "Add the counselor self-rating row");
  s_eval->add_option("--cohort", eval.cohort, "Profile predicted scores by counselor or client");
  s_eval->add_option("--min-sessions", eval.min_sessions)->capture_default_str();

  RationaleArgs rat;
  auto* s_rat = app.add_subcommand("rationale-eval", "BLEU / ROUGE / BERTScore of rationales");
  s_rat->add_option("--pred", rat.pred)->required()->check(CLI::ExistingFile);
  s_rat->add_option("--refs", rat.refs)->required()->check(CLI::ExistingFile);
  s_rat->add_option("--in", rat.in, "Sessions, to group by fold")->check(CLI::ExistingFile);
  s_rat->add_option("--plan", rat.plan)->check(CLI::ExistingFile);
  s_rat->add_option("--tokenizer", rat.tokenizer)->capture_default_str();
  s_rat->add_option("--lexicon", rat.lexicon, "Word list for lexicon-greedy")->check(CLI::ExistingFile);
  s_rat->add_option("--smoothing", rat.smoothing, "none | add-epsilon")->capture_default_str();
  s_rat->add_option("--epsilon", rat.epsilon)->capture_default_str();
  s_rat->add_option("--bertscore-url", rat.bertscore_url);
  s_rat->add_flag("--idf", rat.idf);
  s_rat->add_option("--model-tag", rat.model_tag);
  s_rat->add_flag("--pairs", rat.pairs, "Include per-pair scores in the JSON");
  s_rat->add_option("--rubric-out", rat.rubric_out, "Blank human-rating sheet");
  s_rat->add_option("--out", rat.out)->required();

  LexicalArgs lex;
  auto* s_lex = app.add_subcommand("lexical", "Dimension keywords by weighted log-odds");
  s_lex->add_option("--refs", lex.refs)->required()->check(CLI::ExistingFile);
  s_lex->add_option("--tokenizer", lex.tokenizer)->capture_default_str();
  s_lex->add_option("--lexicon", lex.lexicon)->check(CLI::ExistingFile);
  s_lex->add_option("--top-k", lex.opts.top_k)->capture_default_str();
  s_lex->add_option("--z", lex.opts.z_threshold)->capture_default_str();
  s_lex->add_option("--prior-scale", lex.opts.prior_scale)->capture_default_str();
  s_lex->add_option("--out", lex.out)->required();

  RegressArgs reg;
  auto* s_reg = app.add_subcommand("regress", "OLS of client scores on interaction patterns");
  s_reg->add_option("--in", reg.in)->required()->check(CLI::ExistingFile);
  s_reg->add_option("--features", reg.mode, "proportion | count")->capture_default_str();
  s_reg->add_option("--pattern", reg.patterns, "STRATEGY:REACTION (repeatable)");
  s_reg->add_option("--out", reg.out)->required();

  ExportArgs exp;
  auto* s_exp = app.add_subcommand("export-sft", "Fine-tuning JSONL for one fold");
  s_exp->add_option("--in", exp.in)->required()->check(CLI::ExistingFile);
  s_exp->add_option("--refs", exp.refs)->check(CLI::ExistingFile);
  s_exp->add_option("--plan", exp.plan)->required()->check(CLI::ExistingFile);
  s_exp->add_option("--fold", exp.fold)->capture_default_str();
  s_exp->add_option("--variant", exp.variant, "rationale | score_only")->capture_default_str();
  s_exp->add_flag("--chat", exp.chat, "Chat-message records");
  s_exp->add_option("--language", exp.language)->capture_default_str();
  s_exp->add_option("--set", exp.overrides, "Training config override KEY=VALUE");
  s_exp->add_option("--out-dir", exp.out_dir)->required();

  ReportArgs rep;
  auto* s_rep = app.add_subcommand("report", "Merge eval reports into one comparison table");
  s_rep->add_option("--eval", rep.evals, "Eval report JSON (repeatable)")
      ->required()->check(CLI::ExistingFile);
  s_rep->add_option("--out", rep.out);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::vector<std::string> recorded(args.begin() + (args.empty() ? 0 : 1), args.end());
  try {
    if (*s_synth) {
      Manifest m(s_synth, recorded);
      return run_synth(synth, common, m, out);
    }
    if (*s_validate) return run_validate(validate, common, out, err);
    if (*s_split) {
      Manifest m(s_split, recorded);
      return run_split(split_args, common, m, out, err);
    }
    if (*s_predict) {
      Manifest m(s_predict, recorded);
      return run_predict(predict, common, m, out, err);
    }
    if (*s_eval) {
      Manifest m(s_eval, recorded);
      return run_eval(eval, common, m, out);
    }
    if (*s_rat) {
      Manifest m(s_rat, recorded);
      return run_rationale(rat, common, m, out, err);
    }
    if (*s_lex) {
      Manifest m(s_lex, recorded);
      return run_lexical(lex, common, m, out);
    }
    if (*s_reg) {
      Manifest m(s_reg, recorded);
      return run_regress(reg, common, m, out, err);
    }
    if (*s_exp) {
      Manifest m(s_exp, recorded);
      return run_export(exp, common, m, out);
    }
    if (*s_rep) {
      Manifest m(s_rep, recorded);
      return run_report(rep, m, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace alliance::cli
