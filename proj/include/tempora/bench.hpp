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

#ifndef TEMPORA_BENCH_HPP
#define TEMPORA_BENCH_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tempora/memory.hpp"
#include "tempora/prompts.hpp"
#include "tempora/qa.hpp"

// Benchmark construction: extract temporal events per session, link related
// events across sessions, and draft multiple-choice questions. Human review
// stays out of band — drafts are exported for review and only accepted or
// revised items re-enter as a benchmark.

namespace tempora {

struct TemporalEvent {
  int event_id = 0;
  std::string session_id;
  std::string description;
  std::optional<std::string> relative_expression;
  std::optional<CalDate> inferred_date;
};

struct EventGroup {
  int group_id = 0;
  std::vector<int> member_event_ids;  // >= 2, spanning >= 2 sessions
  std::string shared_entity;
};

enum class ReviewState { pending, accepted, revised, rejected };

inline const char* to_string(ReviewState s) {
  switch (s) {
    case ReviewState::pending: return "pending";
    case ReviewState::accepted: return "accepted";
    case ReviewState::revised: return "revised";
    case ReviewState::rejected: return "rejected";
  }
  return "?";
}

inline ReviewState review_state_from_string(const std::string& s) {
  if (s == "pending") return ReviewState::pending;
  if (s == "accepted") return ReviewState::accepted;
  if (s == "revised") return ReviewState::revised;
  if (s == "rejected") return ReviewState::rejected;
  throw FormatError("unknown review decision '" + s + "'");
}

struct DraftQA {
  TemporalQuestion question;
  std::vector<int> provenance;  // source event ids
  ReviewState review = ReviewState::pending;
};

// --- step 1: event extraction -------------------------------------------------

struct ExtractionResult {
  std::vector<TemporalEvent> events;
  int dropped_lines = 0;
};

// Parses "EVENT | RELATIVE_EXPR | INFERRED_DATE" lines. Unparseable lines are
// dropped and counted; dates outside the sanity window demote to unknown.
inline ExtractionResult extract_events(const DialogueSession& s, Backend& gateway,
                                       const SanityWindow& window, int first_id) {
  const std::string reply = gateway.complete(prompts::extract_events(s));
  ExtractionResult result;
  std::istringstream in(reply);
  std::string line;
  while (std::getline(in, line)) {
    if (tel::textutil::trim(line).empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    for (size_t bar = line.find('|'); bar != std::string::npos;
         bar = line.find('|', start)) {
      fields.push_back(tel::textutil::trim(line.substr(start, bar - start)));
      start = bar + 1;
    }
    fields.push_back(tel::textutil::trim(line.substr(start)));
    if (fields.size() != 3 || fields[0].empty()) {
      ++result.dropped_lines;
      continue;
    }
    TemporalEvent e;
    e.event_id = first_id + static_cast<int>(result.events.size());
    e.session_id = s.session_id;
    e.description = fields[0];
    if (!tel::textutil::iequals(fields[1], "NONE") && !fields[1].empty()) {
      e.relative_expression = fields[1];
    }
    if (!tel::textutil::iequals(fields[2], "UNKNOWN")) {
      try {
        const CalDate d = parse_date(fields[2]);
        if (window.contains(d)) e.inferred_date = d;
      } catch (const Error&) {
        ++result.dropped_lines;
        continue;
      }
    }
    result.events.push_back(std::move(e));
  }
  return result;
}

inline std::vector<TemporalEvent> extract_all(const DialogueCorpus& corpus,
                                              Backend& gateway,
                                              int* dropped_lines = nullptr) {
  validate(corpus);
  const SanityWindow window = SanityWindow::for_corpus(corpus);
  std::vector<TemporalEvent> events;
  int dropped = 0;
  for (const auto& s : corpus.sessions) {
    auto r = extract_events(s, gateway, window,
                            static_cast<int>(events.size()) + 1);
    dropped += r.dropped_lines;
    for (auto& e : r.events) events.push_back(std::move(e));
  }
  if (dropped_lines != nullptr) *dropped_lines = dropped;
  return events;
}

// --- step 2: event linking ------------------------------------------------------

inline std::string render_events(const std::vector<TemporalEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += std::to_string(e.event_id) + ". (session " + e.session_id + ") " +
           e.description;
    if (e.relative_expression) {
      out += " [said: '" + *e.relative_expression + "']";
    }
    out += " [date: ";
    out += e.inferred_date ? to_iso(*e.inferred_date) : "unknown";
    out += "]\n";
  }
  return out;
}

// Groups come back as "GROUP: id,id[,id...] | description" lines. Groups that
// do not span at least two sessions (or name unknown ids) are discarded.
inline std::vector<EventGroup> link_events(const std::vector<TemporalEvent>& events,
                                           Backend& gateway) {
  std::set<std::string> sessions;
  std::map<int, const TemporalEvent*> by_id;
  for (const auto& e : events) {
    sessions.insert(e.session_id);
    by_id[e.event_id] = &e;
  }
  if (sessions.size() < 2) {
    throw DataError("event linking needs events from at least two sessions");
  }

  const std::string reply =
      gateway.complete(prompts::link_events(render_events(events)));
  std::vector<EventGroup> groups;
  std::istringstream in(reply);
  std::string line;
  while (std::getline(in, line)) {
    const size_t colon = line.find(':');
    const size_t bar = line.find('|');
    if (colon == std::string::npos ||
        line.substr(0, colon).find("GROUP") == std::string::npos) {
      continue;
    }
    const std::string id_part =
        line.substr(colon + 1, bar == std::string::npos ? std::string::npos
                                                        : bar - colon - 1);
    EventGroup g;
    g.group_id = static_cast<int>(groups.size()) + 1;
    if (bar != std::string::npos) {
      g.shared_entity = tel::textutil::trim(line.substr(bar + 1));
    }
    std::istringstream ids(id_part);
    std::string tok;
    std::set<std::string> member_sessions;
    bool ok = true;
    while (std::getline(ids, tok, ',')) {
      tok = tel::textutil::trim(tok);
      if (tok.empty()) continue;
      try {
        const int id = std::stoi(tok);
        auto it = by_id.find(id);
        if (it == by_id.end()) {
          ok = false;
          break;
        }
        if (std::find(g.member_event_ids.begin(), g.member_event_ids.end(),
                      id) == g.member_event_ids.end()) {
          g.member_event_ids.push_back(id);
          member_sessions.insert(it->second->session_id);
        }
      } catch (const std::exception&) {
        ok = false;
        break;
      }
    }
    if (ok && g.member_event_ids.size() >= 2 && member_sessions.size() >= 2) {
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

// --- step 3: QA creation ---------------------------------------------------------

struct BenchTargets {
  int ta = 0;
  int tp = 0;
  int ti = 0;
  double unanswerable_fraction = 0.0;

  int total() const { return ta + tp + ti; }
};

namespace detail {

struct EventPair {
  const TemporalEvent* a;
  const TemporalEvent* b;
};

// One "QUESTION | OPT | ... | GOLD_LETTER" line.
inline std::optional<TemporalQuestion> parse_created_qa(
    const std::string& reply, QType qtype, const std::string& question_id,
    bool want_unanswerable) {
  std::string line = tel::textutil::trim(reply);
  const size_t newline = line.find('\n');
  if (newline != std::string::npos) line = tel::textutil::trim(line.substr(0, newline));
  std::vector<std::string> fields;
  size_t start = 0;
  for (size_t bar = line.find('|'); bar != std::string::npos;
       bar = line.find('|', start)) {
    fields.push_back(tel::textutil::trim(line.substr(start, bar - start)));
    start = bar + 1;
  }
  fields.push_back(tel::textutil::trim(line.substr(start)));

  const int count = options_for(qtype);
  if (static_cast<int>(fields.size()) != count + 2) return std::nullopt;
  TemporalQuestion q;
  q.question_id = question_id;
  q.qtype = qtype;
  q.text = fields[0];
  if (q.text.empty()) return std::nullopt;
  for (int i = 0; i < count; ++i) {
    if (fields[static_cast<size_t>(i) + 1].empty()) return std::nullopt;
    q.options.push_back(fields[static_cast<size_t>(i) + 1]);
  }
  const std::string& gold_field = fields.back();
  if (gold_field.size() != 1) return std::nullopt;
  const int gold = std::toupper(static_cast<unsigned char>(gold_field[0])) - 'A';
  if (gold < 0 || gold >= count) return std::nullopt;
  q.gold = gold;
  q.gold_unanswerable = tel::is_unanswerable_text(q.options[static_cast<size_t>(gold)]);
  if (want_unanswerable != q.gold_unanswerable) return std::nullopt;
  return q;
}

}  // namespace detail

// Drafts TA questions from single relative-time events and TP/TI questions
// from cross-session pairs; a configured fraction is drafted as unanswerable.
// Throws InsufficientMaterial when the pool cannot satisfy the targets.
inline std::vector<DraftQA> create_qas(const std::vector<TemporalEvent>& events,
                                       const std::vector<EventGroup>& groups,
                                       Backend& gateway, const BenchTargets& targets,
                                       std::uint64_t seed = 0,
                                       const std::string& id_prefix = "bench") {
  std::map<int, const TemporalEvent*> by_id;
  for (const auto& e : events) by_id[e.event_id] = &e;

  // TA material: relative-time events with a resolved date (ambiguous
  // expressions come back UNKNOWN and are excluded here)
  std::vector<const TemporalEvent*> ta_pool;
  for (const auto& e : events) {
    if (e.relative_expression && e.inferred_date) ta_pool.push_back(&e);
  }
  // TP/TI material: dated cross-session pairs inside one group
  std::vector<detail::EventPair> pair_pool;
  for (const auto& g : groups) {
    for (size_t i = 0; i < g.member_event_ids.size(); ++i) {
      for (size_t j = i + 1; j < g.member_event_ids.size(); ++j) {
        const auto* a = by_id.count(g.member_event_ids[i])
                            ? by_id[g.member_event_ids[i]]
                            : nullptr;
        const auto* b = by_id.count(g.member_event_ids[j])
                            ? by_id[g.member_event_ids[j]]
                            : nullptr;
        if (a == nullptr || b == nullptr) continue;
        if (a->session_id == b->session_id) continue;
        if (!a->inferred_date || !b->inferred_date) continue;
        pair_pool.push_back({a, b});
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::shuffle(ta_pool.begin(), ta_pool.end(), rng);
  std::shuffle(pair_pool.begin(), pair_pool.end(), rng);

  if (static_cast<int>(ta_pool.size()) < targets.ta) {
    throw InsufficientMaterialError(
        "need " + std::to_string(targets.ta) + " relative-time events for TA, have " +
        std::to_string(ta_pool.size()));
  }
  if (static_cast<int>(pair_pool.size()) < targets.tp) {
    throw InsufficientMaterialError(
        "need " + std::to_string(targets.tp) + " cross-session pairs for TP, have " +
        std::to_string(pair_pool.size()));
  }
  if (static_cast<int>(pair_pool.size()) < targets.ti) {
    throw InsufficientMaterialError(
        "need " + std::to_string(targets.ti) + " cross-session pairs for TI, have " +
        std::to_string(pair_pool.size()));
  }

  // distribute the unanswerable share across types, largest targets first
  int unans_total = static_cast<int>(
      std::llround(targets.unanswerable_fraction * targets.total()));
  int unans_ta = std::min(targets.ta, (unans_total * targets.ta +
                                       targets.total() / 2) / std::max(1, targets.total()));
  int unans_tp = std::min(targets.tp, (unans_total * targets.tp +
                                       targets.total() / 2) / std::max(1, targets.total()));
  int unans_ti = std::min(targets.ti, unans_total - unans_ta - unans_tp);
  if (unans_ti < 0) unans_ti = 0;

  std::vector<DraftQA> drafts;
  int serial = 0;

  auto draft_one = [&](QType qtype, const std::string& material,
                       std::vector<int> provenance, bool unanswerable) {
    ++serial;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "_%s_%03d",
                  qtype == QType::TA ? "ta" : qtype == QType::TP ? "tp" : "ti",
                  serial);
    const std::string qid = id_prefix + idbuf;
    std::string task = "Create one ";
    task += qtype == QType::TA
                ? "Temporal Anchoring question asking for the exact date of the event"
                : qtype == QType::TP
                      ? "Temporal Precedence question asking which event happened first"
                      : "Temporal Interval question asking how much time passed "
                        "between the two events";
    task += ". Provide " + std::to_string(options_for(qtype)) +
            " options; the last option must be 'Unanswerable'. ";
    task += unanswerable
                ? "The question must NOT be answerable from the events "
                  "(ask about an aspect they do not establish); GOLD_LETTER "
                  "must be the Unanswerable option."
                : "GOLD_LETTER must be the letter of the correct option.";
    const std::string reply =
        gateway.complete(prompts::create_qa(task, material));
    auto q = detail::parse_created_qa(reply, qtype, qid, unanswerable);
    if (!q) return false;
    validate(*q);
    drafts.push_back(DraftQA{std::move(*q), std::move(provenance),
                             ReviewState::pending});
    return true;
  };

  auto run_type = [&](QType qtype, int target, int unans_count) {
    int made = 0, unans_made = 0;
    size_t cursor = 0;
    auto material_left = [&]() {
      return qtype == QType::TA ? ta_pool.size() - cursor
                                : pair_pool.size() - cursor;
    };
    while (made < target) {
      if (material_left() == 0) {
        throw InsufficientMaterialError(
            std::string("ran out of material drafting ") + to_string(qtype) +
            " questions (" + std::to_string(made) + "/" +
            std::to_string(target) + ")");
      }
      const bool unanswerable = unans_made < unans_count;
      bool ok;
      if (qtype == QType::TA) {
        const TemporalEvent* e = ta_pool[cursor++];
        std::string material =
            "Event: " + e->description + "\nSaid as: '" +
            *e->relative_expression + "'\nActual date: " + to_iso(*e->inferred_date) +
            "\nSession: " + e->session_id;
        ok = draft_one(qtype, material, {e->event_id}, unanswerable);
      } else {
        const detail::EventPair p = pair_pool[cursor++];
        std::string material =
            "Event 1: " + p.a->description + " (date " + to_iso(*p.a->inferred_date) +
            ", session " + p.a->session_id + ")\nEvent 2: " + p.b->description +
            " (date " + to_iso(*p.b->inferred_date) + ", session " +
            p.b->session_id + ")";
        ok = draft_one(qtype, material, {p.a->event_id, p.b->event_id},
                       unanswerable);
      }
      if (ok) {
        ++made;
        if (unanswerable) ++unans_made;
      }
    }
  };

  run_type(QType::TA, targets.ta, unans_ta);
  run_type(QType::TP, targets.tp, unans_tp);
  run_type(QType::TI, targets.ti, unans_ti);
  return drafts;
}

// --- step 4 support: review export/import ----------------------------------------

inline nlohmann::json to_json(const DraftQA& d) {
  nlohmann::json j = to_json(d.question);
  j["provenance"] = d.provenance;
  j["decision"] = to_string(d.review);
  return j;
}

inline DraftQA draft_from_json(const nlohmann::json& j) {
  DraftQA d;
  d.question = question_from_json(j);
  d.provenance = j.value("provenance", std::vector<int>{});
  d.review = review_state_from_string(j.value("decision", std::string("pending")));
  return d;
}

// One JSON object per line; reviewers flip "decision" and may attach a
// "revised" object with replacement fields.
inline std::string export_review(const std::vector<DraftQA>& drafts) {
  std::string out;
  for (const auto& d : drafts) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

struct ReviewImport {
  std::vector<TemporalQuestion> accepted;
  std::vector<std::string> rejected_ids;
  int pending = 0;
};

inline ReviewImport import_review(const std::string& jsonl) {
  ReviewImport result;
  std::istringstream in(jsonl);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (tel::textutil::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError("review line " + std::to_string(lineno) + ": " + ex.what());
    }
    DraftQA d;
    try {
      d = draft_from_json(j);
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError("review line " + std::to_string(lineno) + ": " + ex.what());
    }
    switch (d.review) {
      case ReviewState::pending:
        ++result.pending;
        break;
      case ReviewState::rejected:
        result.rejected_ids.push_back(d.question.question_id);
        break;
      case ReviewState::accepted:
        result.accepted.push_back(d.question);
        break;
      case ReviewState::revised: {
        TemporalQuestion q = d.question;
        if (j.contains("revised")) {
          const auto& rev = j.at("revised");
          if (rev.contains("text")) q.text = rev.at("text").get<std::string>();
          if (rev.contains("options")) {
            q.options = rev.at("options").get<std::vector<std::string>>();
          }
          if (rev.contains("gold")) q.gold = rev.at("gold").get<int>();
          if (rev.contains("gold_unanswerable")) {
            q.gold_unanswerable = rev.at("gold_unanswerable").get<bool>();
          }
        }
        if (q.gold < 0 || q.gold >= static_cast<int>(q.options.size())) {
          throw FormatError("review line " + std::to_string(lineno) +
                            ": revised gold index out of option range");
        }
        validate(q);
        result.accepted.push_back(std::move(q));
        break;
      }
    }
  }
  return result;
}

}  // namespace tempora

#endif  // TEMPORA_BENCH_HPP
