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

#include <string>

#include "CLI11.hpp"
#include "tempora/runner.hpp"

// Command surface: memorize, eval, build-bench, exec-tel, report. All
// configuration comes from flags plus an optional `--config file` (key=value
// lines); the environment is used only for endpoint credentials.

namespace {

void add_backend_flags(CLI::App* cmd, tempora::RunConfig& cfg,
                       std::string& backend_name) {
  cmd->add_option("--backend", backend_name, "live | record | replay")
      ->capture_default_str();
  cmd->add_option("--fixtures", cfg.fixtures_path,
                  "fixture directory (required for record/replay)");
  cmd->add_option("--rate-limit", cfg.rate_limit,
                  "live requests per minute, 0 = unlimited")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "temporal reasoning over multi-session dialogues: timeline memory, "
      "symbolic date programs, and a QA benchmark harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override");

  tempora::RunConfig cfg;
  std::string backend_name = "replay";
  std::string strategy_name = "tremu";
  std::string mode_name = "timeline";

  auto* memorize = app.add_subcommand(
      "memorize", "summarize a dialogue corpus into a memory pool");
  memorize->add_option("--corpus", cfg.corpus_path, "corpus JSON")->required();
  memorize->add_option("--out", cfg.out_path, "memory JSON to write")->required();
  memorize->add_option("--mode", mode_name, "timeline | flat")
      ->capture_default_str();
  memorize->add_flag("--from-locomo", cfg.from_locomo,
                     "treat the corpus file as the upstream dataset layout");
  memorize->add_option("--locomo-sample", cfg.locomo_sample,
                       "sample id to import when the file holds many");
  add_backend_flags(memorize, cfg, backend_name);

  auto* eval = app.add_subcommand(
      "eval", "answer a benchmark and score the results");
  eval->add_option("--benchmark", cfg.benchmark_path, "benchmark JSON")->required();
  eval->add_option("--memory", cfg.memory_path,
                   "memory JSON (memochat/timeline/tremu strategies)");
  eval->add_option("--corpus", cfg.corpus_path, "corpus JSON (sp/cot strategies)");
  eval->add_option("--strategy", strategy_name,
                   "sp | cot | memochat | memochat-cot | timeline-cot | tremu")
      ->capture_default_str();
  eval->add_option("--out-dir", cfg.output_dir, "directory for answer log + report")
      ->capture_default_str();
  eval->add_option("--report-format", cfg.report_format, "text | json | csv")
      ->capture_default_str();
  eval->add_option("--k", cfg.retrieval_k, "retrieval budget")
      ->capture_default_str();
  eval->add_option("--retries", cfg.retries,
                   "program regenerations after a failure")
      ->capture_default_str();
  eval->add_option("--jobs", cfg.jobs, "concurrent question evaluations")
      ->capture_default_str();
  eval->add_flag("--deterministic", cfg.deterministic,
                 "zero latencies and omit timestamps for byte-stable artifacts");
  add_backend_flags(eval, cfg, backend_name);

  auto* bench = app.add_subcommand(
      "build-bench", "extract events, link them, and draft questions");
  bench->add_option("--corpus", cfg.corpus_path, "corpus JSON");
  bench->add_option("--out-dir", cfg.output_dir, "directory for drafts + review")
      ->capture_default_str();
  bench->add_option("--ta", cfg.ta_target, "Temporal Anchoring target count");
  bench->add_option("--tp", cfg.tp_target, "Temporal Precedence target count");
  bench->add_option("--ti", cfg.ti_target, "Temporal Interval target count");
  bench->add_option("--unanswerable-fraction", cfg.unanswerable_fraction,
                    "share of drafts with an Unanswerable gold");
  bench->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  bench->add_option("--import-review", cfg.review_path,
                    "filled review JSONL; emits the accepted benchmark instead");
  add_backend_flags(bench, cfg, backend_name);

  auto* exec = app.add_subcommand("exec-tel",
                                  "run a temporal-expression program file");
  exec->add_option("program", cfg.program_path, "program file")->required();
  exec->add_option("--bind", cfg.bindings,
                   "name=YYYY-MM-DD date binding (repeatable)");
  exec->add_option("--env", cfg.env_path, "JSON file of name -> date bindings");

  auto* report = app.add_subcommand("report", "score an existing answer log");
  report->add_option("--answers", cfg.answers_path, "answer log JSONL")->required();
  report->add_option("--benchmark", cfg.benchmark_path, "benchmark JSON")
      ->required();
  report->add_option("--format", cfg.report_format, "text | json | csv")
      ->capture_default_str();
  report->add_option("--out", cfg.out_path, "write here instead of stdout");
  report->add_flag("--deterministic", cfg.deterministic,
                   "omit the generated-at timestamp");

  CLI11_PARSE(app, argc, argv);

  return tempora::dispatch([&]() -> int {
    cfg.backend = tempora::backend_kind_from_string(backend_name);
    cfg.strategy = tempora::strategy_from_string(strategy_name);
    cfg.mode = tempora::memory_kind_from_string(mode_name);
    if (memorize->parsed()) return tempora::run_memorize(cfg);
    if (eval->parsed()) return tempora::run_eval(cfg);
    if (bench->parsed()) return tempora::run_build_bench(cfg);
    if (exec->parsed()) return tempora::run_exec_tel(cfg);
    if (report->parsed()) return tempora::run_report(cfg);
    throw tempora::ConfigError("no command given");
  });
}
