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

#ifndef TEMPORA_PROMPTS_HPP
#define TEMPORA_PROMPTS_HPP

#include <string>
#include <vector>

#include "tempora/dialogue.hpp"
#include "tempora/gateway.hpp"
#include "tempora/qa.hpp"

// Prompt builders for every model role. These strings are part of the fixture
// contract: fixture keys digest the full message list, so any change here
// requires re-recording fixtures (tools/fixturegen).

namespace tempora::prompts {

inline constexpr size_t kDefaultContextChars = 48000;

// Compact language reference given to the code-generation role.
inline const char* tel_cheatsheet() {
  return
      "You answer by writing a program in a small date expression language.\n"
      "Syntax: zero or more lines 'let NAME := EXPR', then one final line\n"
      "'answer EXPR'. '#' starts a comment. Every name is bound once.\n"
      "Values: date, duration, interval, boolean, text.\n"
      "Literals: date(2020,3,12) | durations like '3 days', '2 weeks',\n"
      "'1 month', '1 year' | strings in double quotes | weekday codes\n"
      "MO TU WE TH FR SA SU (only inside next_weekday).\n"
      "Builtins:\n"
      "  add(date, duration) -> date        sub(date, duration) -> date\n"
      "  add(duration, duration) -> duration  sub likewise\n"
      "  diff_days(a, b) -> duration        days from a to b, signed\n"
      "  diff_months(a, b) -> duration      whole calendar months, signed\n"
      "  next_weekday(date, FR, 1) -> date  1 = on-or-after; -1 = on-or-before\n"
      "  week_range(date) -> interval       Monday..Sunday containing the date\n"
      "  month_range(date) -> interval      first..last day of the month\n"
      "  interval(start, end) -> interval   allen(ivl, ivl) -> text\n"
      "  before(a, b) / after(a, b) -> boolean   dates or intervals\n"
      "  same_day(a, b) -> boolean          min/max(date, date) -> date\n"
      "  if COND then EXPR else EXPR\n"
      "Answer with a date, a duration, or the option letter as a string,\n"
      "e.g. answer \"C\". Output only the program, no prose.\n";
}

inline std::string render_options(const std::vector<std::string>& options) {
  std::string out;
  for (size_t i = 0; i < options.size(); ++i) {
    out += static_cast<char>('A' + i);
    out += ") " + options[i] + "\n";
  }
  return out;
}

inline std::string question_block(const TemporalQuestion& q) {
  return "Question ID: " + q.question_id + "\nQuestion: " + q.text +
         "\nOptions:\n" + render_options(q.options);
}

// --- memorization -----------------------------------------------------------

inline ChatRequest memorize_timeline(const DialogueSession& s) {
  ChatRequest req;
  req.role = Role::mem;
  req.messages.push_back(
      {"system",
       "You build a dated memory of a conversation. For every event "
       "mentioned in the session, output exactly one line of the form\n"
       "DATE | SUMMARY\n"
       "DATE is the inferred calendar date of the event in YYYY-MM-DD form, "
       "or UNKNOWN when it cannot be pinned to a date. Resolve relative "
       "expressions such as 'last Thursday' or 'next week' against the "
       "session date. Also output one line for the conversation itself, "
       "dated with the session date. No other text."});
  req.messages.push_back({"user", "Session ID: " + s.session_id +
                                      "\nSession date: " + to_iso(s.timestamp) +
                                      "\nDialogue:\n" + render_turns(s)});
  return req;
}

inline ChatRequest memorize_flat(const DialogueSession& s) {
  ChatRequest req;
  req.role = Role::mem;
  req.messages.push_back(
      {"system",
       "Summarize the dialogue session in two or three sentences. Reply with "
       "the summary text only."});
  req.messages.push_back({"user", "Session ID: " + s.session_id +
                                      "\nSession date: " + to_iso(s.timestamp) +
                                      "\nDialogue:\n" + render_turns(s)});
  return req;
}

// One corrective re-prompt when the reply did not follow the format.
inline ChatRequest with_format_reminder(ChatRequest req,
                                        const std::string& bad_reply,
                                        const std::string& reminder) {
  req.messages.push_back({"assistant", bad_reply});
  req.messages.push_back({"user", reminder});
  return req;
}

// --- retrieval ---------------------------------------------------------------

inline ChatRequest retrieval(const TemporalQuestion& q,
                             const std::string& entry_listing, int k) {
  ChatRequest req;
  req.role = Role::retrieval;
  req.messages.push_back(
      {"system",
       "You select memory entries relevant to a question. Reply with the ids "
       "of up to " +
           std::to_string(k) +
           " relevant entries, comma-separated, most relevant first. Reply "
           "with ids only."});
  req.messages.push_back(
      {"user", question_block(q) + "Memory entries:\n" + entry_listing});
  return req;
}

// --- neuro-symbolic reasoning -------------------------------------------------

inline ChatRequest code_generation(const TemporalQuestion& q,
                                   const std::string& entry_listing,
                                   const std::string& env_listing) {
  ChatRequest req;
  req.role = Role::code;
  req.messages.push_back({"system", tel_cheatsheet()});
  std::string user = question_block(q);
  user += "Retrieved memory:\n" + entry_listing;
  if (!env_listing.empty()) {
    user += "Known dates usable as names in the program:\n" + env_listing;
  }
  user += "Write the program now.";
  req.messages.push_back({"user", std::move(user)});
  return req;
}

inline ChatRequest code_regeneration(ChatRequest previous,
                                     const std::string& bad_program,
                                     const std::string& error_text) {
  previous.messages.push_back({"assistant", bad_program});
  previous.messages.push_back(
      {"user", "The program failed to execute: " + error_text +
                   "\nOutput a corrected program only."});
  return previous;
}

inline ChatRequest select_from_execution(const TemporalQuestion& q,
                                         const std::string& program,
                                         const std::string& trace_text,
                                         const std::string& result_text) {
  ChatRequest req;
  req.role = Role::select;
  req.messages.push_back(
      {"system",
       "A program was executed to answer a temporal question. Use the program "
       "and its result to pick the correct option. Reply with the single "
       "option letter only."});
  req.messages.push_back({"user", question_block(q) + "Program:\n" + program +
                                      "\nExecution trace:\n" + trace_text +
                                      "Result: " + result_text + "\n"});
  return req;
}

// --- direct answering ---------------------------------------------------------

inline const char* letter_instruction() {
  return "Reply with the single letter of the correct option.";
}

inline const char* cot_instruction() {
  return "Think step by step. Put the final answer on the last line in the "
         "form 'Answer: X'.";
}

inline ChatRequest direct_answer(const TemporalQuestion& q,
                                 const std::string& dialogue_text, bool cot) {
  ChatRequest req;
  req.role = Role::select;
  req.messages.push_back(
      {"system", std::string("You answer temporal questions about a "
                             "multi-session dialogue. ") +
                     (cot ? cot_instruction() : letter_instruction())});
  req.messages.push_back(
      {"user", "Dialogue:\n" + dialogue_text + question_block(q)});
  return req;
}

inline ChatRequest memory_answer(const TemporalQuestion& q,
                                 const std::string& entry_listing, bool cot) {
  ChatRequest req;
  req.role = Role::select;
  req.messages.push_back(
      {"system", std::string("You answer temporal questions using retrieved "
                             "memory of a multi-session dialogue. ") +
                     (cot ? cot_instruction() : letter_instruction())});
  req.messages.push_back(
      {"user", "Retrieved memory:\n" + entry_listing + question_block(q)});
  return req;
}

// --- benchmark construction ----------------------------------------------------

inline ChatRequest extract_events(const DialogueSession& s) {
  ChatRequest req;
  req.role = Role::extract;
  req.messages.push_back(
      {"system",
       "Extract every temporal event from the dialogue session. Output one "
       "line per event of the form\n"
       "EVENT | RELATIVE_EXPR | INFERRED_DATE\n"
       "EVENT is a short description. RELATIVE_EXPR is the relative time "
       "phrase used by the speaker (e.g. 'last Thursday'), or NONE when the "
       "time was absolute or implicit. INFERRED_DATE is YYYY-MM-DD, or "
       "UNKNOWN when the date cannot be resolved (e.g. 'the other day'). No "
       "other text."});
  req.messages.push_back({"user", "Session ID: " + s.session_id +
                                      "\nSession date: " + to_iso(s.timestamp) +
                                      "\nDialogue:\n" + render_turns(s)});
  return req;
}

inline ChatRequest link_events(const std::string& event_listing) {
  ChatRequest req;
  req.role = Role::link;
  req.messages.push_back(
      {"system",
       "Group the events that concern the same or related entities across "
       "different sessions, especially those reflecting change over time. "
       "Output one line per group of the form\n"
       "GROUP: id,id[,id...] | shared entity description\n"
       "Only group events from at least two different sessions. No other "
       "text."});
  req.messages.push_back({"user", "Events:\n" + event_listing});
  return req;
}

inline ChatRequest create_qa(const std::string& task_description,
                             const std::string& material) {
  ChatRequest req;
  req.role = Role::create;
  req.messages.push_back(
      {"system",
       "You write one multiple-choice temporal question from the given "
       "events. Output exactly one line of the form\n"
       "QUESTION | OPTION | OPTION | ... | GOLD_LETTER\n"
       "with as many OPTION fields as requested. Distractor options must be "
       "plausible but wrong. No other text."});
  req.messages.push_back({"user", task_description + "\n" + material});
  return req;
}

}  // namespace tempora::prompts

#endif  // TEMPORA_PROMPTS_HPP
