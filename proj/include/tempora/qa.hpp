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

#ifndef TEMPORA_QA_HPP
#define TEMPORA_QA_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempora/errors.hpp"
#include "tempora/tel/ast.hpp"

// Question and answer-record vocabulary shared by the reasoner, the metrics
// code, and the benchmark builder.

namespace tempora {

// TA: exact date of one relative-time event (5 options).
// TP: which of two cross-session events came first (3 options).
// TI: duration between two cross-session events (5 options).
enum class QType { TA, TP, TI };

inline const char* to_string(QType t) {
  switch (t) {
    case QType::TA: return "TA";
    case QType::TP: return "TP";
    case QType::TI: return "TI";
  }
  return "?";
}

inline QType qtype_from_string(const std::string& s) {
  if (s == "TA") return QType::TA;
  if (s == "TP") return QType::TP;
  if (s == "TI") return QType::TI;
  throw FormatError("unknown question type '" + s + "'");
}

inline int options_for(QType t) { return t == QType::TP ? 3 : 5; }

struct TemporalQuestion {
  std::string question_id;
  std::string conversation_id;
  QType qtype = QType::TA;
  std::string text;
  std::vector<std::string> options;
  int gold = 0;
  bool gold_unanswerable = false;
};

inline void validate(const TemporalQuestion& q) {
  if (static_cast<int>(q.options.size()) != options_for(q.qtype)) {
    throw DataError("question " + q.question_id + " (" + to_string(q.qtype) +
                    ") must have " + std::to_string(options_for(q.qtype)) +
                    " options, has " + std::to_string(q.options.size()));
  }
  if (q.gold < 0 || q.gold >= static_cast<int>(q.options.size())) {
    throw DataError("question " + q.question_id + " gold index out of range");
  }
}

enum class Strategy { sp, cot, memochat, memochat_cot, timeline_cot, tremu };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::sp: return "sp";
    case Strategy::cot: return "cot";
    case Strategy::memochat: return "memochat";
    case Strategy::memochat_cot: return "memochat-cot";
    case Strategy::timeline_cot: return "timeline-cot";
    case Strategy::tremu: return "tremu";
  }
  return "?";
}

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "sp") return Strategy::sp;
  if (s == "cot") return Strategy::cot;
  if (s == "memochat") return Strategy::memochat;
  if (s == "memochat-cot") return Strategy::memochat_cot;
  if (s == "timeline-cot") return Strategy::timeline_cot;
  if (s == "tremu") return Strategy::tremu;
  throw ConfigError("unknown strategy '" + s + "'");
}

enum class SelectionPath { auto_match, llm_select };

inline const char* to_string(SelectionPath p) {
  return p == SelectionPath::auto_match ? "auto-match" : "llm-select";
}

// One program-generation attempt: either it failed with a TelError, or it
// ran and left a trace digest for audit.
struct Attempt {
  std::string program;
  std::optional<tel::TelError> error;
  std::string trace_digest;

  bool failed() const { return error.has_value(); }
};

struct AnswerRecord {
  std::string question_id;
  Strategy strategy = Strategy::sp;
  int predicted = 0;
  SelectionPath selection_path = SelectionPath::llm_select;
  std::vector<Attempt> attempts;  // empty for non-program strategies
  double latency_ms = 0.0;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const {
    for (const auto& g : flags) {
      if (g == f) return true;
    }
    return false;
  }
};

// --- JSON ------------------------------------------------------------------

inline nlohmann::json to_json(const TemporalQuestion& q) {
  return {{"question_id", q.question_id},
          {"conversation_id", q.conversation_id},
          {"qtype", to_string(q.qtype)},
          {"text", q.text},
          {"options", q.options},
          {"gold", q.gold},
          {"gold_unanswerable", q.gold_unanswerable}};
}

inline TemporalQuestion question_from_json(const nlohmann::json& j) {
  TemporalQuestion q;
  q.question_id = j.at("question_id").get<std::string>();
  q.conversation_id = j.value("conversation_id", std::string());
  q.qtype = qtype_from_string(j.at("qtype").get<std::string>());
  q.text = j.at("text").get<std::string>();
  q.options = j.at("options").get<std::vector<std::string>>();
  q.gold = j.at("gold").get<int>();
  q.gold_unanswerable = j.value("gold_unanswerable", false);
  validate(q);
  return q;
}

inline std::vector<TemporalQuestion> benchmark_from_json(const nlohmann::json& j) {
  std::vector<TemporalQuestion> out;
  for (const auto& item : j) out.push_back(question_from_json(item));
  return out;
}

inline nlohmann::json to_json(const std::vector<TemporalQuestion>& qs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& q : qs) arr.push_back(to_json(q));
  return arr;
}

inline nlohmann::json to_json(const Attempt& a) {
  nlohmann::json j{{"program", a.program}};
  if (a.error) {
    j["error"] = {{"kind", tel::to_string(a.error->kind)},
                  {"line", a.error->line},
                  {"column", a.error->column},
                  {"message", a.error->message}};
  } else {
    j["trace_digest"] = a.trace_digest;
  }
  return j;
}

inline Attempt attempt_from_json(const nlohmann::json& j) {
  Attempt a;
  a.program = j.at("program").get<std::string>();
  if (j.contains("error")) {
    const auto& e = j.at("error");
    tel::TelError err;
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "ParseError") err.kind = tel::TelErrorKind::parse;
    else if (kind == "TypeError") err.kind = tel::TelErrorKind::type;
    else if (kind == "NameError") err.kind = tel::TelErrorKind::name;
    else if (kind == "DomainError") err.kind = tel::TelErrorKind::domain;
    else if (kind == "BudgetError") err.kind = tel::TelErrorKind::budget;
    else throw FormatError("unknown TEL error kind '" + kind + "'");
    err.line = e.value("line", 0);
    err.column = e.value("column", 0);
    err.message = e.value("message", std::string());
    a.error = err;
  } else {
    a.trace_digest = j.value("trace_digest", std::string());
  }
  return a;
}

inline nlohmann::json to_json(const AnswerRecord& r) {
  nlohmann::json attempts = nlohmann::json::array();
  for (const auto& a : r.attempts) attempts.push_back(to_json(a));
  return {{"question_id", r.question_id},
          {"strategy", to_string(r.strategy)},
          {"predicted", r.predicted},
          {"selection_path", to_string(r.selection_path)},
          {"attempts", attempts},
          {"latency_ms", r.latency_ms},
          {"flags", r.flags}};
}

inline AnswerRecord record_from_json(const nlohmann::json& j) {
  AnswerRecord r;
  r.question_id = j.at("question_id").get<std::string>();
  r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  r.predicted = j.at("predicted").get<int>();
  r.selection_path = j.at("selection_path").get<std::string>() == "auto-match"
                         ? SelectionPath::auto_match
                         : SelectionPath::llm_select;
  for (const auto& a : j.value("attempts", nlohmann::json::array())) {
    r.attempts.push_back(attempt_from_json(a));
  }
  r.latency_ms = j.value("latency_ms", 0.0);
  r.flags = j.value("flags", std::vector<std::string>{});
  return r;
}

// --- file helpers ----------------------------------------------------------

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(path + ": " + ex.what());
  }
}

inline void save_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << body;
  if (!out) throw DataError("short write to " + path);
}

inline std::vector<AnswerRecord> load_answer_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<AnswerRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

inline std::string answer_log_to_jsonl(const std::vector<AnswerRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace tempora

#endif  // TEMPORA_QA_HPP
