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

// Regenerates everything under data/ that depends on the prompt templates:
// the replay fixtures, the derived memory pools, and the golden report.
// Run it after changing any prompt, then commit the results:
//
//   fixturegen [data-dir]

#include <filesystem>
#include <iostream>

#include "support/scripted_model.hpp"
#include "tempora/metrics.hpp"
#include "tempora/reasoner.hpp"

using namespace tempora;

int main(int argc, char** argv) {
  const std::filesystem::path data = argc > 1 ? argv[1] : "data";
  const std::filesystem::path fixtures = data / "fixtures";

  try {
    // stale fixtures would shadow renamed keys; start clean
    std::filesystem::create_directories(fixtures);
    for (const auto& entry : std::filesystem::directory_iterator(fixtures)) {
      if (entry.path().extension() == ".json") {
        std::filesystem::remove(entry.path());
      }
    }

    RecordBackend backend(std::make_unique<ScriptedBackend>(scripted::respond),
                          FixtureStore(fixtures));

    const auto mini_corpus =
        corpus_from_json(load_json_file((data / "corpus_mini.json").string()));
    const auto cases_corpus =
        corpus_from_json(load_json_file((data / "corpus_cases.json").string()));
    const auto mini_bench =
        benchmark_from_json(load_json_file((data / "bench_mini.json").string()));
    const auto cases_bench =
        benchmark_from_json(load_json_file((data / "bench_cases.json").string()));

    const MemoryPool mini_timeline =
        memorize_corpus(mini_corpus, backend, MemoryKind::timeline);
    const MemoryPool mini_flat =
        memorize_corpus(mini_corpus, backend, MemoryKind::flat);
    const MemoryPool cases_timeline =
        memorize_corpus(cases_corpus, backend, MemoryKind::timeline);
    const MemoryPool cases_flat =
        memorize_corpus(cases_corpus, backend, MemoryKind::flat);
    save_text_file((data / "memory_mini_timeline.json").string(),
                   to_json(mini_timeline).dump(2) + "\n");
    save_text_file((data / "memory_mini_flat.json").string(),
                   to_json(mini_flat).dump(2) + "\n");
    save_text_file((data / "memory_cases_timeline.json").string(),
                   to_json(cases_timeline).dump(2) + "\n");
    save_text_file((data / "memory_cases_flat.json").string(),
                   to_json(cases_flat).dump(2) + "\n");

    ReasonerConfig cfg;
    cfg.deterministic = true;

    std::vector<AnswerRecord> mini_records;
    for (const auto& q : mini_bench) {
      mini_records.push_back(answer_tremu(q, mini_timeline, backend, cfg));
    }
    for (const auto& q : cases_bench) {
      answer_tremu(q, cases_timeline, backend, cfg);
      answer_cot(q, cases_corpus, backend, cfg);
    }

    std::filesystem::create_directories(data / "golden");
    save_text_file((data / "golden" / "answers_mini.jsonl").string(),
                   answer_log_to_jsonl(mini_records));
    EvalReport report = compute_metrics(mini_records, mini_bench);
    save_text_file((data / "golden" / "report_mini.txt").string(),
                   render_report(report, ReportFormat::text));

    size_t fixture_count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fixtures)) {
      fixture_count += entry.path().extension() == ".json";
    }
    std::cout << "wrote " << fixture_count << " fixtures, 4 memory pools, and "
              << "2 golden files under " << data.string() << "\n";
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "fixturegen failed: " << ex.what() << "\n";
    return 1;
  }
}
