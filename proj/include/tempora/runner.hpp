// Copyright 2026 The Tempora Authors.
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

#ifndef TEMPORA_RUNNER_HPP
#define TEMPORA_RUNNER_HPP

#include <atomic>
#include <filesystem>
#include <iostream>
#include <thread>

#include "tempora/bench.hpp"
#include "tempora/gateway_http.hpp"
#include "tempora/memory.hpp"
#include "tempora/metrics.hpp"
#include "tempora/reasoner.hpp"

// Command implementations behind the CLI. Every command is a function of a
// RunConfig; identical configs, inputs, and fixtures produce byte-identical
// artifacts (timestamps excluded under --deterministic).

namespace tempora {

struct RunConfig {
  // inputs
  std::string corpus_path;
  std::string memory_path;
  std::string benchmark_path;
  std::string fixtures_path;
  std::string answers_path;            // report: answer log to score
  std::string program_path;            // exec-tel: program file
  std::string env_path;                // exec-tel: JSON {name: "YYYY-MM-DD"}
  std::vector<std::string> bindings;   // exec-tel: name=YYYY-MM-DD pairs
  std::string review_path;             // build-bench: filled review file
  // outputs
  std::string output_dir = ".";
  std::string out_path;                // single-file commands
  std::string report_format = "text";
  // knobs
  Strategy strategy = Strategy::tremu;
  BackendKind backend = BackendKind::replay;
  MemoryKind mode = MemoryKind::timeline;
  int retrieval_k = kDefaultRetrievalK;
  int retries = 3;
  int rate_limit = 0;
  int jobs = 1;
  std::uint64_t seed = 0;
  bool deterministic = false;
  bool from_locomo = false;            // corpus file is in the upstream layout
  std::string locomo_sample;           // sample id when the file holds many
  // build-bench targets
  int ta_target = 0;
  int tp_target = 0;
  int ti_target = 0;
  double unanswerable_fraction = 0.0;

  ReasonerConfig reasoner() const {
    ReasonerConfig cfg;
    cfg.retries = retries;
    cfg.retrieval_k = retrieval_k;
    cfg.deterministic = deterministic;
    return cfg;
  }
};

namespace runcfg {

inline void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is required");
  if (!std::filesystem::exists(path)) {
    throw ConfigError(what + " path does not exist: " + path);
  }
}

inline std::unique_ptr<Backend> open_backend(const RunConfig& cfg) {
  if (cfg.backend == BackendKind::replay) {
    require_file(cfg.fixtures_path, "fixtures");
  } else if (cfg.backend == BackendKind::record) {
    if (cfg.fixtures_path.empty()) {
      throw ConfigError("record backend requires a fixtures directory");
    }
    std::filesystem::create_directories(cfg.fixtures_path);
  }
  HttpBackendConfig http = http_config_from_env();
  http.rate_limit_per_minute = cfg.rate_limit;
  return make_backend(cfg.backend, cfg.fixtures_path, http);
}

inline std::filesystem::path output_file(const RunConfig& cfg,
                                         const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return std::filesystem::path(cfg.output_dir) / name;
}

}  // namespace runcfg

namespace runcfg {

// --from-locomo: the corpus file is in the upstream dataset layout, either a
// single sample or an array of samples selected by --locomo-sample.
inline DialogueCorpus load_corpus(const RunConfig& cfg) {
  const nlohmann::json doc = load_json_file(cfg.corpus_path);
  if (!cfg.from_locomo) return corpus_from_json(doc);
  const nlohmann::json* sample = &doc;
  if (doc.is_array()) {
    if (doc.empty()) throw DataError("empty sample list in " + cfg.corpus_path);
    sample = nullptr;
    for (const auto& item : doc) {
      if (cfg.locomo_sample.empty() ||
          item.value("sample_id", std::string()) == cfg.locomo_sample) {
        sample = &item;
        break;
      }
    }
    if (sample == nullptr) {
      throw DataError("sample '" + cfg.locomo_sample + "' not found in " +
                      cfg.corpus_path);
    }
  }
  const std::string conv_id = sample->value(
      "sample_id", cfg.locomo_sample.empty() ? "locomo" : cfg.locomo_sample);
  LocomoImportStats stats;
  DialogueCorpus corpus = import_locomo(*sample, conv_id, &stats);
  std::cout << "imported " << stats.sessions_imported << " sessions ("
            << stats.sessions_skipped << " skipped)\n";
  return corpus;
}

}  // namespace runcfg

// corpus -> memory JSON (timeline or flat).
inline int run_memorize(const RunConfig& cfg) {
  runcfg::require_file(cfg.corpus_path, "corpus");
  if (cfg.out_path.empty()) throw ConfigError("memorize requires --out");
  const DialogueCorpus corpus = runcfg::load_corpus(cfg);
  auto backend = runcfg::open_backend(cfg);
  const MemoryPool pool = memorize_corpus(corpus, *backend, cfg.mode);
  save_text_file(cfg.out_path, to_json(pool).dump(2) + "\n");
  std::cout << "memorized " << pool.entries.size() << " entries ("
            << to_string(cfg.mode) << ") -> " << cfg.out_path << "\n";
  return 0;
}

// benchmark + memory (and corpus for sp/cot) -> answer log + report.
inline int run_eval(const RunConfig& cfg) {
  runcfg::require_file(cfg.benchmark_path, "benchmark");
  const auto questions = benchmark_from_json(load_json_file(cfg.benchmark_path));
  if (questions.empty()) throw DataError("benchmark is empty");

  std::optional<DialogueCorpus> corpus;
  if (!cfg.corpus_path.empty()) {
    runcfg::require_file(cfg.corpus_path, "corpus");
    corpus = corpus_from_json(load_json_file(cfg.corpus_path));
  }
  std::optional<MemoryPool> pool;
  if (!cfg.memory_path.empty()) {
    runcfg::require_file(cfg.memory_path, "memory");
    pool = pool_from_json(load_json_file(cfg.memory_path));
  }

  auto backend = runcfg::open_backend(cfg);
  const ReasonerConfig rcfg = cfg.reasoner();

  std::vector<AnswerRecord> records(questions.size());
  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= questions.size() || failed.load()) return;
      try {
        records[i] = answer(cfg.strategy, questions[i],
                            corpus ? &*corpus : nullptr, pool ? &*pool : nullptr,
                            *backend, rcfg);
      } catch (const Error& ex) {
        std::lock_guard<std::mutex> lock(failure_mu);
        failure = std::string(ex.kind_name()) + ": " + ex.what();
        failed.store(true);
        return;
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failed.load()) throw GatewayError(failure);

  const auto answers_path = runcfg::output_file(cfg, "answers.jsonl");
  save_text_file(answers_path.string(), answer_log_to_jsonl(records));

  EvalReport report = compute_metrics(records, questions);
  if (!cfg.deterministic) report.generated_at = utc_timestamp();
  const ReportFormat format = report_format_from_string(cfg.report_format);
  const char* ext = format == ReportFormat::json
                        ? "report.json"
                        : format == ReportFormat::csv ? "report.csv"
                                                      : "report.txt";
  const auto report_path = runcfg::output_file(cfg, ext);
  save_text_file(report_path.string(), render_report(report, format));
  std::cout << render_report(report, ReportFormat::text);
  std::cout << "answers -> " << answers_path.string() << "\nreport  -> "
            << report_path.string() << "\n";
  return 0;
}

// corpus -> drafts + pending review file + draft benchmark; or, with
// --import-review, a filled review file -> accepted benchmark.
inline int run_build_bench(const RunConfig& cfg) {
  if (!cfg.review_path.empty()) {
    runcfg::require_file(cfg.review_path, "review");
    std::ifstream in(cfg.review_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const ReviewImport imported = import_review(buf.str());
    const auto bench_path = runcfg::output_file(cfg, "benchmark.json");
    save_text_file(bench_path.string(), to_json(imported.accepted).dump(2) + "\n");
    std::cout << "accepted " << imported.accepted.size() << ", rejected "
              << imported.rejected_ids.size() << ", pending " << imported.pending
              << " -> " << bench_path.string() << "\n";
    for (const auto& id : imported.rejected_ids) {
      std::cout << "rejected: " << id << "\n";
    }
    return 0;
  }

  runcfg::require_file(cfg.corpus_path, "corpus");
  const DialogueCorpus corpus = corpus_from_json(load_json_file(cfg.corpus_path));
  auto backend = runcfg::open_backend(cfg);

  int dropped = 0;
  const auto events = extract_all(corpus, *backend, &dropped);
  const auto groups = link_events(events, *backend);
  BenchTargets targets;
  targets.ta = cfg.ta_target;
  targets.tp = cfg.tp_target;
  targets.ti = cfg.ti_target;
  targets.unanswerable_fraction = cfg.unanswerable_fraction;
  const auto drafts = create_qas(events, groups, *backend, targets, cfg.seed,
                                 corpus.conversation_id);

  const auto review_path = runcfg::output_file(cfg, "review.jsonl");
  save_text_file(review_path.string(), export_review(drafts));
  std::vector<TemporalQuestion> draft_questions;
  for (const auto& d : drafts) draft_questions.push_back(d.question);
  const auto draft_path = runcfg::output_file(cfg, "benchmark_draft.json");
  save_text_file(draft_path.string(), to_json(draft_questions).dump(2) + "\n");
  std::cout << "extracted " << events.size() << " events (" << dropped
            << " lines dropped), " << groups.size() << " groups, drafted "
            << drafts.size() << " questions\nreview  -> " << review_path.string()
            << "\ndrafts  -> " << draft_path.string() << "\n";
  return 0;
}

// program file + bindings -> value + trace on stdout. Developer tool.
inline int run_exec_tel(const RunConfig& cfg) {
  runcfg::require_file(cfg.program_path, "program");
  std::ifstream in(cfg.program_path);
  std::stringstream buf;
  buf << in.rdbuf();

  tel::ValueEnv env;
  if (!cfg.env_path.empty()) {
    runcfg::require_file(cfg.env_path, "environment");
    for (const auto& [name, value] : load_json_file(cfg.env_path).items()) {
      env[name] = tel::Value{parse_date(value.get<std::string>())};
    }
  }
  for (const auto& b : cfg.bindings) {
    const size_t eq = b.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--bind expects name=YYYY-MM-DD, got '" + b + "'");
    }
    env[b.substr(0, eq)] = tel::Value{parse_date(b.substr(eq + 1))};
  }

  const tel::ExecResult result = tel::execute(buf.str(), env);
  for (const auto& step : result.trace) {
    std::cout << step.name << " = " << tel::to_string(step.value) << "\n";
  }
  if (result.error) {
    throw DataError(result.error->describe());
  }
  std::cout << "answer: " << tel::to_string(*result.value) << "\n";
  return 0;
}

// answer log + benchmark -> rendered report.
inline int run_report(const RunConfig& cfg) {
  runcfg::require_file(cfg.answers_path, "answers");
  runcfg::require_file(cfg.benchmark_path, "benchmark");
  const auto records = load_answer_log(cfg.answers_path);
  const auto questions = benchmark_from_json(load_json_file(cfg.benchmark_path));
  EvalReport report = compute_metrics(records, questions);
  if (!cfg.deterministic) report.generated_at = utc_timestamp();
  const std::string body =
      render_report(report, report_format_from_string(cfg.report_format));
  if (cfg.out_path.empty()) {
    std::cout << body;
  } else {
    save_text_file(cfg.out_path, body);
    std::cout << "report -> " << cfg.out_path << "\n";
  }
  return 0;
}

// Maps module errors onto exit codes, emitting machine-readable JSON on
// stderr: 2 config, 3 data, 4 gateway, 5 internal.
template <typename Fn>
inline int dispatch(Fn&& fn) noexcept {
  try {
    return fn();
  } catch (const Error& ex) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"kind", ex.kind_name()}, {"message", ex.what()}}}}
                     .dump()
              << "\n";
    return ex.exit_code();
  } catch (const tel::TelException& ex) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"kind", tel::to_string(ex.error().kind)},
                       {"message", ex.error().describe()}}}}
                     .dump()
              << "\n";
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << nlohmann::json{
                     {"error",
                      {{"kind", "InternalError"}, {"message", ex.what()}}}}
                     .dump()
              << "\n";
    return 5;
  }
}

}  // namespace tempora

#endif  // TEMPORA_RUNNER_HPP
