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

#ifndef TEMPORA_REASONER_HPP
#define TEMPORA_REASONER_HPP

#include <chrono>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "tempora/memory.hpp"
#include "tempora/prompts.hpp"
#include "tempora/qa.hpp"
#include "tempora/tel/interp.hpp"
#include "tempora/tel/match.hpp"

// Question answering under six strategies: direct prompting (sp), chain of
// thought (cot), flat-memory answering (memochat, memochat-cot), timeline
// memory with chain of thought (timeline-cot), and program generation with
// execution, error-driven regeneration, and answer selection (tremu).

namespace tempora {

struct ReasonerConfig {
  int retries = 3;  // regenerations allowed after a failed program
  int retrieval_k = kDefaultRetrievalK;
  size_t context_budget_chars = prompts::kDefaultContextChars;
  int tel_budget = tel::kDefaultBudget;
  bool deterministic = false;  // zero out latencies for byte-stable logs
};

// Record flags.
inline constexpr const char* kFlagTruncated = "truncated";
inline constexpr const char* kFlagDegenerate = "degenerate";
inline constexpr const char* kFlagFallbackLastOption = "fallback-last-option";
inline constexpr const char* kFlagExhaustedRetries = "exhausted-retries";
inline constexpr const char* kFlagAmbiguousOptions = "ambiguous-options";

// --- answer-letter extraction -------------------------------------------------
// Fixed rule: look at the last non-empty line first; if it names no option,
// scan the whole reply and take the last mention; otherwise the caller falls
// back to the last option.

namespace detail {

struct LetterHit {
  size_t pos;
  int index;
};

inline void collect_letters(const std::string& text, int option_count,
                            std::vector<LetterHit>& hits) {
  static const std::regex patterns[] = {
      std::regex(R"([Aa]nswer\s*(?:is)?\s*:?\s*\**\(?([A-Z])\)?)"),
      std::regex(R"(\(([A-Z])\))"),
      std::regex(R"([Oo]ption\s+([A-Z])\b)"),
      std::regex(R"(^\s*\**\(?([A-Z])[\)\.:]?\**\s*$)",
                 std::regex::ECMAScript | std::regex::multiline),
  };
  for (const auto& pat : patterns) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), pat);
         it != std::sregex_iterator(); ++it) {
      const int idx = (*it)[1].str()[0] - 'A';
      if (idx >= 0 && idx < option_count) {
        hits.push_back({static_cast<size_t>(it->position(1)), idx});
      }
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const LetterHit& a, const LetterHit& b) { return a.pos < b.pos; });
}

}  // namespace detail

// Returns the option index named by the reply, or -1.
inline int extract_letter(const std::string& reply, int option_count) {
  // last non-empty line first
  size_t end = reply.find_last_not_of(" \t\r\n");
  if (end == std::string::npos) return -1;
  size_t start = reply.find_last_of('\n', end);
  const std::string last_line =
      reply.substr(start == std::string::npos ? 0 : start + 1,
                   end - (start == std::string::npos ? 0 : start + 1) + 1);
  std::vector<detail::LetterHit> hits;
  detail::collect_letters(last_line, option_count, hits);
  if (!hits.empty()) return hits.front().index;
  hits.clear();
  detail::collect_letters(reply, option_count, hits);
  if (!hits.empty()) return hits.back().index;
  return -1;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Picks the reply's letter or deterministically falls back to the last
// option, flagging the record.
inline void apply_letter(AnswerRecord& r, const std::string& reply,
                         const TemporalQuestion& q) {
  const int letter = extract_letter(reply, static_cast<int>(q.options.size()));
  if (letter >= 0) {
    r.predicted = letter;
  } else {
    r.predicted = static_cast<int>(q.options.size()) - 1;
    r.flags.push_back(kFlagFallbackLastOption);
  }
}

// Models often wrap programs in code fences; strip them.
inline std::string strip_code_fences(const std::string& reply) {
  std::string s = tel::textutil::trim(reply);
  if (s.rfind("```", 0) == 0) {
    const size_t first_newline = s.find('\n');
    if (first_newline == std::string::npos) return "";
    s = s.substr(first_newline + 1);
    const size_t closing = s.rfind("```");
    if (closing != std::string::npos) s = s.substr(0, closing);
  }
  return tel::textutil::trim(s);
}

struct TremuEnv {
  tel::ValueEnv values;
  std::string listing;
};

// One named date per session plus one per retrieved entry with a known event
// date, all spelled out for the code prompt.
inline TremuEnv build_env(const MemoryPool& pool,
                          const std::vector<MemoryEntry>& retrieved) {
  TremuEnv env;
  std::vector<std::string> session_order;
  std::map<std::string, CalDate> session_dates;
  for (const auto& e : pool.entries) {
    if (!session_dates.count(e.session_id)) {
      session_order.push_back(e.session_id);
      session_dates[e.session_id] = e.mention_date;
    }
  }
  for (size_t i = 0; i < session_order.size(); ++i) {
    const std::string name = "session_" + std::to_string(i + 1) + "_date";
    const CalDate d = session_dates[session_order[i]];
    env.values[name] = tel::Value{d};
    env.listing += "  " + name + " = " + to_iso(d) + "\n";
  }
  for (const auto& e : retrieved) {
    if (!e.event_date) continue;
    const std::string name = "entry_" + std::to_string(e.id) + "_date";
    env.values[name] = tel::Value{*e.event_date};
    std::string summary = e.summary.size() > 60 ? e.summary.substr(0, 60) + "..."
                                                : e.summary;
    env.listing += "  " + name + " = " + to_iso(*e.event_date) + " (" + summary +
                   ")\n";
  }
  return env;
}

inline std::string trace_text(const tel::Trace& trace) {
  std::string out;
  for (const auto& step : trace) {
    out += step.name + " = " + tel::to_string(step.value) + "\n";
  }
  return out;
}

}  // namespace detail

// --- strategies ----------------------------------------------------------------

inline AnswerRecord answer_sp(const TemporalQuestion& q,
                              const DialogueCorpus& corpus, Backend& gateway,
                              const ReasonerConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  AnswerRecord r;
  r.question_id = q.question_id;
  r.strategy = Strategy::sp;
  r.selection_path = SelectionPath::llm_select;
  bool truncated = false;
  const std::string dialogue =
      render_dialogue(corpus, cfg.context_budget_chars, &truncated);
  if (truncated) r.flags.push_back(kFlagTruncated);
  detail::apply_letter(r, gateway.complete(prompts::direct_answer(q, dialogue, false)),
                       q);
  r.latency_ms = cfg.deterministic ? 0.0 : detail::elapsed_ms(start);
  return r;
}

inline AnswerRecord answer_cot(const TemporalQuestion& q,
                               const DialogueCorpus& corpus, Backend& gateway,
                               const ReasonerConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  AnswerRecord r;
  r.question_id = q.question_id;
  r.strategy = Strategy::cot;
  r.selection_path = SelectionPath::llm_select;
  bool truncated = false;
  const std::string dialogue =
      render_dialogue(corpus, cfg.context_budget_chars, &truncated);
  if (truncated) r.flags.push_back(kFlagTruncated);
  detail::apply_letter(r, gateway.complete(prompts::direct_answer(q, dialogue, true)),
                       q);
  r.latency_ms = cfg.deterministic ? 0.0 : detail::elapsed_ms(start);
  return r;
}

inline AnswerRecord answer_memochat(const TemporalQuestion& q,
                                    const MemoryPool& flat_pool, Backend& gateway,
                                    bool with_cot,
                                    const ReasonerConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  AnswerRecord r;
  r.question_id = q.question_id;
  r.strategy = with_cot ? Strategy::memochat_cot : Strategy::memochat;
  r.selection_path = SelectionPath::llm_select;
  std::string listing;
  if (flat_pool.entries.empty()) {
    listing = "(no memory available)\n";
    r.flags.push_back(kFlagDegenerate);
  } else {
    listing = render_entries(retrieve(q, flat_pool, gateway, cfg.retrieval_k));
  }
  detail::apply_letter(
      r, gateway.complete(prompts::memory_answer(q, listing, with_cot)), q);
  r.latency_ms = cfg.deterministic ? 0.0 : detail::elapsed_ms(start);
  return r;
}

inline AnswerRecord answer_timeline_cot(const TemporalQuestion& q,
                                        const MemoryPool& timeline_pool,
                                        Backend& gateway,
                                        const ReasonerConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  AnswerRecord r;
  r.question_id = q.question_id;
  r.strategy = Strategy::timeline_cot;
  r.selection_path = SelectionPath::llm_select;
  std::string listing;
  if (timeline_pool.entries.empty()) {
    listing = "(no memory available)\n";
    r.flags.push_back(kFlagDegenerate);
  } else {
    listing = render_entries(retrieve(q, timeline_pool, gateway, cfg.retrieval_k));
  }
  detail::apply_letter(
      r, gateway.complete(prompts::memory_answer(q, listing, true)), q);
  r.latency_ms = cfg.deterministic ? 0.0 : detail::elapsed_ms(start);
  return r;
}

// retrieve -> generate program -> execute; on failure, regenerate with the
// error appended, up to cfg.retries extra attempts; on success, auto-match
// the value against the options, else ask the select role. Every attempt is
// logged. If all generations fail, fall back to selection over the raw
// retrieved memory.
inline AnswerRecord answer_tremu(const TemporalQuestion& q,
                                 const MemoryPool& timeline_pool,
                                 Backend& gateway,
                                 const ReasonerConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  AnswerRecord r;
  r.question_id = q.question_id;
  r.strategy = Strategy::tremu;
  r.selection_path = SelectionPath::llm_select;

  std::vector<MemoryEntry> retrieved;
  if (timeline_pool.entries.empty()) {
    r.flags.push_back(kFlagDegenerate);
  } else {
    retrieved = retrieve(q, timeline_pool, gateway, cfg.retrieval_k);
  }
  const std::string listing =
      retrieved.empty() ? "(no memory available)\n" : render_entries(retrieved);
  const detail::TremuEnv env = detail::build_env(timeline_pool, retrieved);

  ChatRequest req = prompts::code_generation(q, listing, env.listing);
  bool answered = false;
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    const std::string reply = gateway.complete(req);
    const std::string program = detail::strip_code_fences(reply);
    tel::ExecResult exec = tel::execute(program, env.values, cfg.tel_budget);
    Attempt a;
    a.program = program;
    if (exec.error) {
      a.error = exec.error;
      r.attempts.push_back(std::move(a));
      req = prompts::code_regeneration(std::move(req), reply,
                                       exec.error->describe());
      continue;
    }
    a.trace_digest = tel::trace_digest(exec.trace);
    r.attempts.push_back(std::move(a));

    std::optional<int> match;
    try {
      match = tel::match_option(*exec.value, q.options);
    } catch (const AmbiguityError&) {
      r.flags.push_back(kFlagAmbiguousOptions);
    }
    if (match) {
      r.predicted = *match;
      r.selection_path = SelectionPath::auto_match;
    } else {
      const std::string reply2 = gateway.complete(prompts::select_from_execution(
          q, r.attempts.back().program, detail::trace_text(exec.trace),
          tel::to_string(*exec.value)));
      r.selection_path = SelectionPath::llm_select;
      detail::apply_letter(r, reply2, q);
    }
    answered = true;
    break;
  }

  if (!answered) {
    r.flags.push_back(kFlagExhaustedRetries);
    detail::apply_letter(
        r, gateway.complete(prompts::memory_answer(q, listing, false)), q);
  }
  r.latency_ms = cfg.deterministic ? 0.0 : detail::elapsed_ms(start);
  return r;
}

// Dispatch by strategy. sp/cot need the corpus; the rest need a memory pool.
inline AnswerRecord answer(Strategy strategy, const TemporalQuestion& q,
                           const DialogueCorpus* corpus, const MemoryPool* pool,
                           Backend& gateway, const ReasonerConfig& cfg = {}) {
  validate(q);
  switch (strategy) {
    case Strategy::sp:
    case Strategy::cot:
      if (corpus == nullptr) {
        throw ConfigError("strategy requires the dialogue corpus");
      }
      return strategy == Strategy::sp ? answer_sp(q, *corpus, gateway, cfg)
                                      : answer_cot(q, *corpus, gateway, cfg);
    case Strategy::memochat:
    case Strategy::memochat_cot:
      if (pool == nullptr) throw ConfigError("strategy requires a memory pool");
      return answer_memochat(q, *pool, gateway,
                             strategy == Strategy::memochat_cot, cfg);
    case Strategy::timeline_cot:
      if (pool == nullptr) throw ConfigError("strategy requires a memory pool");
      return answer_timeline_cot(q, *pool, gateway, cfg);
    case Strategy::tremu:
      if (pool == nullptr) throw ConfigError("strategy requires a memory pool");
      return answer_tremu(q, *pool, gateway, cfg);
  }
  throw ConfigError("unknown strategy");
}

}  // namespace tempora

#endif  // TEMPORA_REASONER_HPP
