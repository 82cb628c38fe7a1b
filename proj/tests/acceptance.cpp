// Acceptance suite. Each criterion prints one PASS/FAIL line; the binary
// exits non-zero if any criterion fails. Criteria run against the library,
// the checked-in replay fixtures, and the installed CLI binary.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "support/oracle.hpp"
#include "support/proggen.hpp"
#include "support/tempdir.hpp"
#include "tempora/metrics.hpp"
#include "tempora/reasoner.hpp"
#include "tempora/runner.hpp"

using namespace tempora;

namespace {

const std::string kData = TEMPORA_DATA_DIR;
const std::string kCli = TEMPORA_CLI_PATH;

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path + ">";
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

char fmtbuf[256];

// 1: 1,000 random well-typed programs evaluate identically to the
// day-enumeration oracle, in under 30 seconds.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  proggen::Generator gen(20260811);
  proggen::OracleInterp interp;
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const tel::Program prog = gen.next_program();
    const std::string source = tel::to_source(prog);
    const tel::ExecResult got = tel::execute(source, {});
    if (!got.ok()) {
      ++mismatches;
      continue;
    }
    const tel::Value want = proggen::to_tel(interp.run(tel::parse_program(source)));
    if (!(*got.value == want)) ++mismatches;
  }
  const double secs = seconds_since(start);
  std::snprintf(fmtbuf, sizeof(fmtbuf),
                "1000 programs, %d mismatches, %.2fs (budget 30s)", mismatches,
                secs);
  report(1, "TEL-oracle equivalence", mismatches == 0 && secs < 30.0, fmtbuf);
}

// 2: all 28x28 interval pairs over a 7-day grid produce exactly one of the 13
// relations, matching the endpoint-comparison oracle.
void criterion_2() {
  auto day = [](int n) { return add_days(CalDate{2020, 3, 9}, n); };
  std::vector<DateInterval> grid;
  for (int s = 0; s < 7; ++s) {
    for (int e = s; e < 7; ++e) grid.push_back(DateInterval{day(s), day(e)});
  }
  int pairs = 0, mismatches = 0;
  std::set<AllenRelation> seen;
  for (const auto& a : grid) {
    for (const auto& b : grid) {
      ++pairs;
      const std::int64_t as = day_number(a.start), ae = day_number(a.end);
      const std::int64_t bs = day_number(b.start), be = day_number(b.end);
      // endpoint-comparison oracle: the 13 definitional predicates
      std::vector<AllenRelation> hits;
      if (as == bs && ae == be) hits.push_back(AllenRelation::equals);
      if (as == bs && ae < be) hits.push_back(AllenRelation::starts);
      if (as == bs && ae > be) hits.push_back(AllenRelation::started_by);
      if (ae == be && as > bs) hits.push_back(AllenRelation::finishes);
      if (ae == be && as < bs) hits.push_back(AllenRelation::finished_by);
      if (ae < bs) hits.push_back(AllenRelation::before);
      if (as > be) hits.push_back(AllenRelation::after);
      if (ae == bs && as < bs && ae < be) hits.push_back(AllenRelation::meets);
      if (as == be && as > bs && ae > be) hits.push_back(AllenRelation::met_by);
      if (as > bs && ae < be) hits.push_back(AllenRelation::during);
      if (as < bs && ae > be) hits.push_back(AllenRelation::contains);
      if (as < bs && bs < ae && ae < be) hits.push_back(AllenRelation::overlaps);
      if (bs < as && as < be && be < ae) {
        hits.push_back(AllenRelation::overlapped_by);
      }
      if (hits.size() != 1 || allen_relation(a, b) != hits[0]) ++mismatches;
      if (hits.size() == 1) seen.insert(hits[0]);
    }
  }
  std::snprintf(fmtbuf, sizeof(fmtbuf),
                "%d pairs (28x28), %d mismatches, %zu relations observed", pairs,
                mismatches, seen.size());
  report(2, "Allen exhaustiveness",
         pairs == 28 * 28 && mismatches == 0 && seen.size() == 13, fmtbuf);
}

// 3: with the checked-in fixtures, the program-execution strategy answers "C"
// on both case-study questions and chain-of-thought answers "E" on both.
void criterion_3() {
  try {
    const auto corpus =
        corpus_from_json(load_json_file(kData + "/corpus_cases.json"));
    const auto pool =
        pool_from_json(load_json_file(kData + "/memory_cases_timeline.json"));
    const auto bench =
        benchmark_from_json(load_json_file(kData + "/bench_cases.json"));
    ReplayBackend backend{FixtureStore(kData + "/fixtures")};
    ReasonerConfig cfg;
    cfg.deterministic = true;
    bool pass = bench.size() == 2;
    std::string detail;
    for (const auto& q : bench) {
      const AnswerRecord tremu = answer_tremu(q, pool, backend, cfg);
      const AnswerRecord cot = answer_cot(q, corpus, backend, cfg);
      const char tremu_letter = static_cast<char>('A' + tremu.predicted);
      const char cot_letter = static_cast<char>('A' + cot.predicted);
      pass = pass && tremu_letter == 'C' && cot_letter == 'E';
      detail += q.question_id + ": tremu=" + tremu_letter +
                " cot=" + cot_letter + "  ";
    }
    report(3, "Paper case fixtures", pass, detail + "(want tremu=C cot=E)");
  } catch (const std::exception& ex) {
    report(3, "Paper case fixtures", false, ex.what());
  }
}

// 4: metric arithmetic on synthetic record sets.
void criterion_4() {
  auto make_q = [](int i, bool unans) {
    TemporalQuestion q;
    q.question_id = "q" + std::to_string(i);
    q.qtype = QType::TA;
    q.text = "synthetic";
    q.options = {"2020-01-01", "2020-02-02", "2020-03-03", "2020-04-04",
                 "Unanswerable"};
    q.gold = unans ? 4 : 0;
    q.gold_unanswerable = unans;
    return q;
  };
  auto make_r = [](const std::string& id, int predicted) {
    AnswerRecord r;
    r.question_id = id;
    r.strategy = Strategy::tremu;
    r.predicted = predicted;
    return r;
  };

  std::vector<TemporalQuestion> qs;
  std::vector<AnswerRecord> rs;
  for (int i = 0; i < 600; ++i) {
    const bool unans = i < 112;
    qs.push_back(make_q(i, unans));
    int predicted;
    if (i < 86) predicted = 4;        // correct unanswerable
    else if (i < 112) predicted = 0;  // missed unanswerable
    else if (i < 181) predicted = 4;  // spurious unanswerable (69 of them)
    else predicted = 0;
    rs.push_back(make_r(qs.back().question_id, predicted));
  }
  const EvalReport a = compute_metrics(rs, qs);
  const bool part1 = std::abs(a.unans_precision - 55.48) <= 0.005 &&
                     std::abs(a.unans_recall - 76.79) <= 0.005 &&
                     std::abs(a.unans_f1 - 64.42) <= 0.01;

  std::vector<AnswerRecord> all_unans;
  for (const auto& q : qs) all_unans.push_back(make_r(q.question_id, 4));
  const EvalReport b = compute_metrics(all_unans, qs);
  const bool part2 = std::abs(b.unans_recall - 100.00) <= 0.005 &&
                     std::abs(b.unans_precision - 18.67) <= 0.01;

  std::snprintf(fmtbuf, sizeof(fmtbuf),
                "P=%.2f R=%.2f F1=%.2f (want 55.48/76.79/64.42); "
                "all-unanswerable P=%.2f R=%.2f (want 18.67/100.00)",
                a.unans_precision, a.unans_recall, a.unans_f1, b.unans_precision,
                b.unans_recall);
  report(4, "Metric arithmetic", part1 && part2, fmtbuf);
}

// 5: 3,000 randomized weekday/range checks against calendar enumeration plus
// the two pinned facts.
void criterion_5() {
  std::mt19937_64 rng(5150);
  int failures = 0;
  std::uniform_int_distribution<int> year(2019, 2021), month(1, 12), wd(1, 7),
      ord(-3, 3);
  for (int i = 0; i < 3000; ++i) {
    const int y = year(rng), m = month(rng);
    std::uniform_int_distribution<int> day(1, oracle::month_len(y, m));
    const oracle::Date od{y, m, day(rng)};
    const CalDate t = oracle::to_lib(od);
    int n = ord(rng);
    if (n == 0) n = 1;
    const int w = wd(rng);
    if (oracle::from_lib(next_weekday(t, Weekday{w}, n)) !=
        oracle::next_weekday(od, w, n)) {
      ++failures;
    }
    const auto lw = calendar_range(t, RangeUnit::week);
    const auto ow = oracle::week_range(od);
    if (oracle::from_lib(lw.start) != ow.start ||
        oracle::from_lib(lw.end) != ow.end) {
      ++failures;
    }
    const auto lm = calendar_range(t, RangeUnit::month);
    const auto om = oracle::month_range(od);
    if (oracle::from_lib(lm.start) != om.start ||
        oracle::from_lib(lm.end) != om.end) {
      ++failures;
    }
  }
  const bool pinned =
      calendar_range(CalDate{2020, 3, 11}, RangeUnit::week) ==
          DateInterval{{2020, 3, 9}, {2020, 3, 15}} &&
      add_relative(CalDate{2020, 1, 31}, {0, 1, 0}) == CalDate{2020, 2, 29};
  std::snprintf(fmtbuf, sizeof(fmtbuf),
                "3000 randomized cases, %d failures; pinned facts %s", failures,
                pinned ? "hold" : "VIOLATED");
  report(5, "Relative-time semantics", failures == 0 && pinned, fmtbuf);
}

// 6: failure accounting. A [malformed, valid] fixture sequence gives one
// record with 2 attempts and 1 failure (50.00 over that question); the
// 10-question replay mini-run has 1 failure among 11 generations (9.09).
void criterion_6() {
  try {
    // record a malformed-then-valid sequence, then replay it
    testsupport::TempDir dir("acc6");
    TemporalQuestion q;
    q.question_id = "acc6_q";
    q.qtype = QType::TA;
    q.text = "When did the event happen?";
    q.options = {"2020-01-01", "2020-01-02", "2020-01-03", "2020-01-04",
                 "Unanswerable"};
    q.gold = 1;
    MemoryPool pool;
    pool.conversation_id = "acc6";
    pool.entries.push_back(MemoryEntry{1, "s1", CalDate{2020, 1, 5},
                                       CalDate{2020, 1, 2}, "the event",
                                       MemoryKind::timeline});
    {
      int code_calls = 0;
      auto scripted = std::make_unique<ScriptedBackend>(
          [&code_calls](const ChatRequest& req) -> std::string {
            if (req.role == Role::retrieval) return "1";
            if (req.role == Role::code) {
              return ++code_calls == 1 ? "let t := date(2020,1,2\nanswer t"
                                       : "let t := date(2020,1,2)\nanswer t";
            }
            return "B";
          });
      RecordBackend recorder(std::move(scripted), FixtureStore(dir.path()));
      answer_tremu(q, pool, recorder, {});
    }
    ReplayBackend replay{FixtureStore(dir.path())};
    ReasonerConfig cfg;
    cfg.deterministic = true;
    const AnswerRecord r = answer_tremu(q, pool, replay, cfg);
    const double single = failure_rate({r});
    const bool part1 = r.attempts.size() == 2 && r.attempts[0].failed() &&
                       !r.attempts[1].failed() && std::abs(single - 50.00) <= 0.005;

    // 10-question mini-run over the shipped fixtures
    const auto bench =
        benchmark_from_json(load_json_file(kData + "/bench_mini.json"));
    const auto mini_pool =
        pool_from_json(load_json_file(kData + "/memory_mini_timeline.json"));
    ReplayBackend shipped{FixtureStore(kData + "/fixtures")};
    std::vector<AnswerRecord> records;
    int generations = 0, failures = 0;
    for (size_t i = 0; i < 10; ++i) {
      records.push_back(answer_tremu(bench[i], mini_pool, shipped, cfg));
      for (const auto& a : records.back().attempts) {
        ++generations;
        failures += a.failed();
      }
    }
    const double rate = failure_rate(records);
    const bool part2 = generations == 11 && failures == 1 &&
                       std::abs(rate - 9.09) <= 0.01;
    std::snprintf(fmtbuf, sizeof(fmtbuf),
                  "[malformed,valid]: %zu attempts, rate %.2f (want 50.00); "
                  "mini-run: %d failures / %d generations, rate %.2f (want 9.09)",
                  r.attempts.size(), single, failures, generations, rate);
    report(6, "Failure accounting", part1 && part2, fmtbuf);
  } catch (const std::exception& ex) {
    report(6, "Failure accounting", false, ex.what());
  }
}

// 7: `eval --backend replay` on the shipped 12-question benchmark produces
// byte-identical artifacts across runs and across --jobs 1 vs --jobs 4, in
// under 5 seconds per run.
void criterion_7() {
  try {
    const auto bench =
        benchmark_from_json(load_json_file(kData + "/bench_mini.json"));
    int ta = 0, tp = 0, ti = 0, unans = 0;
    for (const auto& q : bench) {
      ta += q.qtype == QType::TA && !q.gold_unanswerable;
      tp += q.qtype == QType::TP;
      ti += q.qtype == QType::TI;
      unans += q.gold_unanswerable;
    }
    const bool shape = bench.size() == 12 && ta == 4 && tp == 3 && ti == 4 &&
                       unans == 1;

    testsupport::TempDir out1("acc7a"), out2("acc7b"), out3("acc7c");
    auto run = [&](const std::string& out_dir, int jobs) {
      const std::string cmd =
          kCli + " eval --benchmark " + kData + "/bench_mini.json --memory " +
          kData + "/memory_mini_timeline.json --strategy tremu --backend replay" +
          " --fixtures " + kData + "/fixtures --out-dir " + out_dir +
          " --deterministic --jobs " + std::to_string(jobs) + " >/dev/null";
      const auto start = std::chrono::steady_clock::now();
      const int status = std::system(cmd.c_str());
      const double secs = seconds_since(start);
      return std::pair<int, double>(
          WIFEXITED(status) ? WEXITSTATUS(status) : -1, secs);
    };
    const auto [rc1, t1] = run(out1.str(), 1);
    const auto [rc2, t2] = run(out2.str(), 1);
    const auto [rc3, t3] = run(out3.str(), 4);
    const bool ran = rc1 == 0 && rc2 == 0 && rc3 == 0;
    const bool fast = t1 < 5.0 && t2 < 5.0 && t3 < 5.0;
    const std::string a1 = slurp(out1.str() + "/answers.jsonl");
    const bool identical =
        a1 == slurp(out2.str() + "/answers.jsonl") &&
        a1 == slurp(out3.str() + "/answers.jsonl") &&
        slurp(out1.str() + "/report.txt") == slurp(out2.str() + "/report.txt") &&
        slurp(out1.str() + "/report.txt") == slurp(out3.str() + "/report.txt");
    std::snprintf(fmtbuf, sizeof(fmtbuf),
                  "12q (4TA+3TP+4TI+1 unanswerable)=%s, runs ok=%s, "
                  "byte-identical=%s, %.2f/%.2f/%.2fs (budget 5s)",
                  shape ? "yes" : "NO", ran ? "yes" : "NO",
                  identical ? "yes" : "NO", t1, t2, t3);
    report(7, "End-to-end determinism", shape && ran && fast && identical,
           fmtbuf);
  } catch (const std::exception& ex) {
    report(7, "End-to-end determinism", false, ex.what());
  }
}

// 8: replayed memorization of the 3-session corpus: timeline >= 3 entries,
// every mention date equals its session timestamp, at least one inferred
// event date differs; flat yields exactly 3 entries.
void criterion_8() {
  try {
    const auto corpus =
        corpus_from_json(load_json_file(kData + "/corpus_mini.json"));
    ReplayBackend backend{FixtureStore(kData + "/fixtures")};
    const MemoryPool timeline =
        memorize_corpus(corpus, backend, MemoryKind::timeline);
    const MemoryPool flat = memorize_corpus(corpus, backend, MemoryKind::flat);

    std::map<std::string, CalDate> session_dates;
    for (const auto& s : corpus.sessions) {
      session_dates[s.session_id] = s.timestamp;
    }
    bool mention_ok = true;
    int distinct_event_dates = 0;
    for (const auto& e : timeline.entries) {
      mention_ok = mention_ok && e.mention_date == session_dates.at(e.session_id);
      if (e.event_date && !(*e.event_date == e.mention_date)) {
        ++distinct_event_dates;
      }
    }
    const bool pass = corpus.sessions.size() == 3 &&
                      timeline.entries.size() >= 3 && mention_ok &&
                      distinct_event_dates >= 1 && flat.entries.size() == 3;
    std::snprintf(fmtbuf, sizeof(fmtbuf),
                  "timeline entries=%zu (>=3), mention dates %s, %d entries "
                  "with event!=mention (>=1), flat entries=%zu (want 3)",
                  timeline.entries.size(), mention_ok ? "all match" : "MISMATCH",
                  distinct_event_dates, flat.entries.size());
    report(8, "Memorization invariants", pass, fmtbuf);
  } catch (const std::exception& ex) {
    report(8, "Memorization invariants", false, ex.what());
  }
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
