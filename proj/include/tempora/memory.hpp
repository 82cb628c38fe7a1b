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

#ifndef TEMPORA_MEMORY_HPP
#define TEMPORA_MEMORY_HPP

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "tempora/dialogue.hpp"
#include "tempora/gateway.hpp"
#include "tempora/prompts.hpp"

// Memorization and retrieval. Timeline memorization asks the model for one
// dated line per event; flat memorization stores one undated summary per
// session. Retrieval is prompt-based over an indexed entry listing.

namespace tempora {

// Event dates this far outside the corpus are treated as hallucinated and
// demoted to unknown.
struct SanityWindow {
  CalDate lo;
  CalDate hi;

  static SanityWindow around(const CalDate& first, const CalDate& last) {
    return SanityWindow{add_relative(first, {-10, 0, 0}),
                        add_relative(last, {10, 0, 0})};
  }

  static SanityWindow for_corpus(const DialogueCorpus& corpus) {
    if (corpus.sessions.empty()) {
      throw DataError("corpus has no sessions");
    }
    return around(corpus.sessions.front().timestamp,
                  corpus.sessions.back().timestamp);
  }

  bool contains(const CalDate& d) const { return lo <= d && d <= hi; }
};

namespace detail {

inline std::string truncate_summary(const std::string& text, size_t limit = 240) {
  std::string t = tel::textutil::trim(text);
  std::replace(t.begin(), t.end(), '\n', ' ');
  if (t.size() <= limit) return t;
  return t.substr(0, limit) + "...";
}

// "DATE | SUMMARY" lines; DATE is ISO, MM/DD/YYYY, or UNKNOWN.
inline std::vector<MemoryEntry> parse_timeline_reply(
    const std::string& reply, const DialogueSession& s, const SanityWindow& window,
    int first_id) {
  std::vector<MemoryEntry> out;
  std::istringstream in(reply);
  std::string line;
  while (std::getline(in, line)) {
    const size_t bar = line.find('|');
    if (bar == std::string::npos) continue;
    const std::string date_text = tel::textutil::trim(line.substr(0, bar));
    const std::string summary = tel::textutil::trim(line.substr(bar + 1));
    if (summary.empty() || date_text.empty()) continue;
    MemoryEntry e;
    e.id = first_id + static_cast<int>(out.size());
    e.session_id = s.session_id;
    e.mention_date = s.timestamp;
    e.kind = MemoryKind::timeline;
    e.summary = summary;
    if (!tel::textutil::iequals(date_text, "UNKNOWN")) {
      try {
        const CalDate d = parse_date(date_text);
        if (window.contains(d)) e.event_date = d;
      } catch (const Error&) {
        continue;  // drop lines with malformed dates
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline MemoryEntry fallback_entry(const DialogueSession& s, int id,
                                  MemoryKind kind) {
  MemoryEntry e;
  e.id = id;
  e.session_id = s.session_id;
  e.mention_date = s.timestamp;
  e.event_date = s.timestamp;
  e.summary = truncate_summary(render_turns(s));
  e.kind = kind;
  return e;
}

}  // namespace detail

// One prompt per session; malformed output gets one corrective re-prompt and
// then a single fallback entry, so memorization never fails on content.
inline std::vector<MemoryEntry> memorize_timeline(const DialogueSession& s,
                                                  Backend& gateway,
                                                  const SanityWindow& window,
                                                  int first_id) {
  const ChatRequest req = prompts::memorize_timeline(s);
  std::string reply = gateway.complete(req);
  auto entries = detail::parse_timeline_reply(reply, s, window, first_id);
  if (!entries.empty()) return entries;

  reply = gateway.complete(prompts::with_format_reminder(
      req, reply,
      "That reply was not in the required format. Reply again using exactly "
      "one 'DATE | SUMMARY' line per event, with DATE as YYYY-MM-DD or "
      "UNKNOWN."));
  entries = detail::parse_timeline_reply(reply, s, window, first_id);
  if (!entries.empty()) return entries;

  return {detail::fallback_entry(s, first_id, MemoryKind::flat)};
}

inline MemoryEntry memorize_flat(const DialogueSession& s, Backend& gateway,
                                 int id) {
  const ChatRequest req = prompts::memorize_flat(s);
  std::string reply = tel::textutil::trim(gateway.complete(req));
  if (reply.empty()) {
    reply = tel::textutil::trim(gateway.complete(prompts::with_format_reminder(
        req, reply, "That reply was empty. Reply with the summary text only.")));
  }
  MemoryEntry e;
  e.id = id;
  e.session_id = s.session_id;
  e.mention_date = s.timestamp;
  e.event_date = s.timestamp;  // flat memory keys events by mention time only
  e.kind = MemoryKind::flat;
  e.summary = reply.empty() ? detail::truncate_summary(render_turns(s))
                            : detail::truncate_summary(reply, 2000);
  return e;
}

inline MemoryPool memorize_corpus(const DialogueCorpus& corpus, Backend& gateway,
                                  MemoryKind mode) {
  validate(corpus);
  const SanityWindow window = SanityWindow::for_corpus(corpus);
  MemoryPool pool;
  pool.conversation_id = corpus.conversation_id;
  int next_id = 1;
  for (const auto& s : corpus.sessions) {
    if (mode == MemoryKind::flat) {
      pool.entries.push_back(memorize_flat(s, gateway, next_id));
      ++next_id;
    } else {
      auto entries = memorize_timeline(s, gateway, window, next_id);
      next_id += static_cast<int>(entries.size());
      for (auto& e : entries) pool.entries.push_back(std::move(e));
    }
  }
  return pool;
}

// --- retrieval ----------------------------------------------------------------

inline constexpr int kRetrievalChunk = 60;
inline constexpr int kDefaultRetrievalK = 10;

namespace detail {

inline std::vector<int> parse_id_list(const std::string& reply) {
  static const std::regex number(R"(\d+)");
  std::vector<int> ids;
  std::set<int> seen;
  auto begin = std::sregex_iterator(reply.begin(), reply.end(), number);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const long v = std::strtol(it->str().c_str(), nullptr, 10);
    if (v > 0 && v <= 1000000 && seen.insert(static_cast<int>(v)).second) {
      ids.push_back(static_cast<int>(v));
    }
  }
  return ids;
}

// Deterministic fallback: entries whose dates sit nearest the dates named in
// the question; with no dates in the question, the most recent entries.
inline std::vector<MemoryEntry> nearest_by_date(const std::string& question,
                                                const MemoryPool& pool, int k) {
  const std::vector<CalDate> q_dates = tel::scan_dates(question);
  std::vector<std::pair<std::int64_t, size_t>> ranked;
  for (size_t i = 0; i < pool.entries.size(); ++i) {
    const auto& e = pool.entries[i];
    std::int64_t best;
    if (q_dates.empty()) {
      // recency: later entries first
      best = -day_number(e.event_date ? *e.event_date : e.mention_date);
    } else {
      best = std::numeric_limits<std::int64_t>::max();
      for (const auto& qd : q_dates) {
        const std::int64_t dm = std::abs(diff_days(qd, e.mention_date).days);
        best = std::min(best, dm);
        if (e.event_date) {
          best = std::min(best, std::abs(diff_days(qd, *e.event_date).days));
        }
      }
    }
    ranked.emplace_back(best, i);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MemoryEntry> out;
  for (size_t i = 0; i < ranked.size() && static_cast<int>(out.size()) < k; ++i) {
    out.push_back(pool.entries[ranked[i].second]);
  }
  return out;
}

}  // namespace detail

// Prompts the retrieval role with an indexed listing of the pool; parses the
// returned id list, drops unknown ids, truncates to k preserving model order.
// Long pools are chunked and the per-chunk selections unioned.
inline std::vector<MemoryEntry> retrieve(const TemporalQuestion& q,
                                         const MemoryPool& pool, Backend& gateway,
                                         int k = kDefaultRetrievalK) {
  if (pool.entries.empty()) throw DataError("retrieve over an empty pool");
  if (k < 1) throw ContractError("retrieval budget k must be >= 1");

  std::vector<int> chosen;
  for (size_t start = 0; start < pool.entries.size();
       start += kRetrievalChunk) {
    const size_t end = std::min(pool.entries.size(),
                                start + static_cast<size_t>(kRetrievalChunk));
    std::vector<MemoryEntry> chunk(pool.entries.begin() + start,
                                   pool.entries.begin() + end);
    const std::string reply =
        gateway.complete(prompts::retrieval(q, render_entries(chunk), k));
    for (int id : detail::parse_id_list(reply)) {
      if (pool.find(id) != nullptr &&
          std::find(chosen.begin(), chosen.end(), id) == chosen.end()) {
        chosen.push_back(id);
      }
    }
  }
  if (chosen.empty()) return detail::nearest_by_date(q.text, pool, k);

  std::vector<MemoryEntry> out;
  for (int id : chosen) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(*pool.find(id));
  }
  return out;
}

}  // namespace tempora

#endif  // TEMPORA_MEMORY_HPP
