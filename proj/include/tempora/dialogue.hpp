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

#ifndef TEMPORA_DIALOGUE_HPP
#define TEMPORA_DIALOGUE_HPP

#include <algorithm>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempora/calendar.hpp"
#include "tempora/errors.hpp"
#include "tempora/tel/match.hpp"

// The dialogue substrate and the memory pool built over it. A memory entry
// distinguishes the date an event happened (inferred) from the date it was
// mentioned (the session timestamp).

namespace tempora {

struct Turn {
  std::string speaker;
  std::string text;
};

struct DialogueSession {
  std::string session_id;
  CalDate timestamp;
  std::vector<Turn> turns;
};

struct DialogueCorpus {
  std::string conversation_id;
  std::vector<std::string> speakers;
  std::vector<DialogueSession> sessions;
};

inline void validate(const DialogueCorpus& corpus) {
  for (size_t i = 0; i < corpus.sessions.size(); ++i) {
    const auto& s = corpus.sessions[i];
    if (s.turns.empty()) {
      throw DataError("session " + s.session_id + " has no turns");
    }
    if (i > 0 && !(corpus.sessions[i - 1].timestamp < s.timestamp)) {
      throw DataError("session timestamps must strictly increase (" +
                      corpus.sessions[i - 1].session_id + " -> " +
                      s.session_id + ")");
    }
  }
}

enum class MemoryKind { timeline, flat };

inline const char* to_string(MemoryKind k) {
  return k == MemoryKind::timeline ? "timeline" : "flat";
}

inline MemoryKind memory_kind_from_string(const std::string& s) {
  if (s == "timeline") return MemoryKind::timeline;
  if (s == "flat") return MemoryKind::flat;
  throw ConfigError("unknown memory mode '" + s + "'");
}

struct MemoryEntry {
  int id = 0;
  std::string session_id;
  CalDate mention_date;                  // the source session's timestamp
  std::optional<CalDate> event_date;     // inferred; nullopt = unknown
  std::string summary;
  MemoryKind kind = MemoryKind::timeline;
};

struct MemoryPool {
  std::string conversation_id;
  std::vector<MemoryEntry> entries;

  const MemoryEntry* find(int id) const {
    for (const auto& e : entries) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }
};

// --- JSON -------------------------------------------------------------------

inline nlohmann::json to_json(const DialogueCorpus& corpus) {
  nlohmann::json sessions = nlohmann::json::array();
  for (const auto& s : corpus.sessions) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& t : s.turns) {
      turns.push_back({{"speaker", t.speaker}, {"text", t.text}});
    }
    sessions.push_back({{"session_id", s.session_id},
                        {"timestamp", to_iso(s.timestamp)},
                        {"turns", turns}});
  }
  return {{"conversation_id", corpus.conversation_id},
          {"speakers", corpus.speakers},
          {"sessions", sessions}};
}

inline DialogueCorpus corpus_from_json(const nlohmann::json& j) {
  DialogueCorpus corpus;
  corpus.conversation_id = j.at("conversation_id").get<std::string>();
  corpus.speakers = j.value("speakers", std::vector<std::string>{});
  for (const auto& s : j.at("sessions")) {
    DialogueSession session;
    session.session_id = s.at("session_id").get<std::string>();
    session.timestamp = parse_date(s.at("timestamp").get<std::string>());
    for (const auto& t : s.at("turns")) {
      session.turns.push_back(Turn{t.at("speaker").get<std::string>(),
                                   t.at("text").get<std::string>()});
    }
    corpus.sessions.push_back(std::move(session));
  }
  validate(corpus);
  return corpus;
}

inline nlohmann::json to_json(const MemoryPool& pool) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : pool.entries) {
    nlohmann::json item{{"id", e.id},
                        {"session_id", e.session_id},
                        {"mention_date", to_iso(e.mention_date)},
                        {"summary", e.summary},
                        {"kind", to_string(e.kind)}};
    item["event_date"] =
        e.event_date ? nlohmann::json(to_iso(*e.event_date)) : nlohmann::json();
    entries.push_back(std::move(item));
  }
  return {{"conversation_id", pool.conversation_id}, {"entries", entries}};
}

inline MemoryPool pool_from_json(const nlohmann::json& j) {
  MemoryPool pool;
  pool.conversation_id = j.at("conversation_id").get<std::string>();
  for (const auto& e : j.at("entries")) {
    MemoryEntry entry;
    entry.id = e.at("id").get<int>();
    entry.session_id = e.at("session_id").get<std::string>();
    entry.mention_date = parse_date(e.at("mention_date").get<std::string>());
    if (e.contains("event_date") && !e.at("event_date").is_null()) {
      entry.event_date = parse_date(e.at("event_date").get<std::string>());
    }
    entry.summary = e.at("summary").get<std::string>();
    entry.kind = memory_kind_from_string(e.at("kind").get<std::string>());
    pool.entries.push_back(std::move(entry));
  }
  return pool;
}

// --- rendering --------------------------------------------------------------

inline std::string render_turns(const DialogueSession& s) {
  std::string out;
  for (const auto& t : s.turns) {
    out += t.speaker + ": " + t.text + "\n";
  }
  return out;
}

inline std::string render_session(const DialogueSession& s) {
  return "[Session " + s.session_id + " - " + to_iso(s.timestamp) + "]\n" +
         render_turns(s);
}

// Whole dialogue within a character budget. Oldest sessions drop first; the
// flag reports whether anything was dropped.
inline std::string render_dialogue(const DialogueCorpus& corpus,
                                   size_t max_chars, bool* truncated) {
  std::vector<std::string> rendered;
  rendered.reserve(corpus.sessions.size());
  for (const auto& s : corpus.sessions) rendered.push_back(render_session(s));

  size_t total = 0;
  size_t first = rendered.size();
  while (first > 0 && total + rendered[first - 1].size() <= max_chars) {
    total += rendered[first - 1].size();
    --first;
  }
  if (truncated != nullptr) *truncated = first > 0;
  std::string out;
  if (first > 0) out += "[earlier sessions omitted]\n";
  for (size_t i = first; i < rendered.size(); ++i) out += rendered[i];
  return out;
}

inline std::string render_entry_line(const MemoryEntry& e) {
  std::string dates = "[event ";
  dates += e.event_date ? to_iso(*e.event_date) : "unknown";
  dates += "; mentioned " + to_iso(e.mention_date) + "]";
  return std::to_string(e.id) + ". " + dates + " " + e.summary;
}

inline std::string render_entries(const std::vector<MemoryEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += render_entry_line(e) + "\n";
  return out;
}

// --- LoCoMo import ----------------------------------------------------------

// Best-effort conversion of the upstream dataset layout ("session_1",
// "session_1_date_time", speaker_a/b) into the corpus schema. Sessions whose
// date cannot be parsed are skipped; non-increasing timestamps are dropped.
struct LocomoImportStats {
  int sessions_imported = 0;
  int sessions_skipped = 0;
};

inline DialogueCorpus import_locomo(const nlohmann::json& j,
                                    const std::string& conversation_id,
                                    LocomoImportStats* stats = nullptr) {
  const nlohmann::json& conv = j.contains("conversation") ? j.at("conversation") : j;
  DialogueCorpus corpus;
  corpus.conversation_id = conversation_id;
  if (conv.contains("speaker_a")) {
    corpus.speakers.push_back(conv.at("speaker_a").get<std::string>());
  }
  if (conv.contains("speaker_b")) {
    corpus.speakers.push_back(conv.at("speaker_b").get<std::string>());
  }

  static const std::regex session_key(R"(^session_(\d+)$)");
  std::vector<std::pair<int, std::string>> keys;
  for (auto it = conv.begin(); it != conv.end(); ++it) {
    std::smatch m;
    const std::string key = it.key();
    if (std::regex_match(key, m, session_key)) {
      keys.emplace_back(std::stoi(m[1]), key);
    }
  }
  std::sort(keys.begin(), keys.end());

  LocomoImportStats local;
  for (const auto& [num, key] : keys) {
    const std::string date_key = key + "_date_time";
    std::optional<CalDate> date;
    if (conv.contains(date_key) && conv.at(date_key).is_string()) {
      auto found = tel::scan_dates(conv.at(date_key).get<std::string>());
      if (!found.empty()) date = found.front();
    }
    if (!date || !conv.at(key).is_array()) {
      ++local.sessions_skipped;
      continue;
    }
    DialogueSession session;
    session.session_id = key;
    session.timestamp = *date;
    for (const auto& t : conv.at(key)) {
      std::string text;
      if (t.contains("clean_text")) text = t.at("clean_text").get<std::string>();
      else if (t.contains("text")) text = t.at("text").get<std::string>();
      std::string speaker = t.value("speaker", std::string("unknown"));
      if (!text.empty()) session.turns.push_back(Turn{speaker, text});
    }
    if (session.turns.empty() ||
        (!corpus.sessions.empty() &&
         !(corpus.sessions.back().timestamp < session.timestamp))) {
      ++local.sessions_skipped;
      continue;
    }
    corpus.sessions.push_back(std::move(session));
    ++local.sessions_imported;
  }
  if (stats != nullptr) *stats = local;
  validate(corpus);
  return corpus;
}

}  // namespace tempora

#endif  // TEMPORA_DIALOGUE_HPP
