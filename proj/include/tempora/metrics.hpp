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

#ifndef TEMPORA_METRICS_HPP
#define TEMPORA_METRICS_HPP

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempora/qa.hpp"
#include "tempora/tel/match.hpp"

// Scoring: per-type and overall accuracy, precision/recall/F1 on the
// unanswerable subset, and the execution-failure percentage over program
// generations.

namespace tempora {

// Percentages are reported to 2 decimals, rounding half away from zero.
inline double round_pct(double v) { return std::round(v * 100.0) / 100.0; }

inline double pct(std::int64_t num, std::int64_t den) {
  if (den == 0) return 0.0;
  return round_pct(100.0 * static_cast<double>(num) / static_cast<double>(den));
}

inline std::string format_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct EvalReport {
  int count_ta = 0, count_tp = 0, count_ti = 0;
  double acc_ta = 0, acc_tp = 0, acc_ti = 0, acc_overall = 0;
  double unans_precision = 0, unans_recall = 0, unans_f1 = 0;
  // execution failures over program generations; absent when no strategy in
  // the record set generates programs
  bool failure_present = false;
  double failure_pct = 0;
  int generation_failures = 0;
  int generation_attempts = 0;
  std::map<std::string, int> flag_counts;
  std::string strategy;      // uniform strategy of the records, or "mixed"
  std::string generated_at;  // empty in deterministic runs

  int total() const { return count_ta + count_tp + count_ti; }
};

// TelError attempts / total generation attempts, as a percentage.
inline double failure_rate(const std::vector<AnswerRecord>& records) {
  std::int64_t failures = 0, attempts = 0;
  for (const auto& r : records) {
    for (const auto& a : r.attempts) {
      ++attempts;
      if (a.failed()) ++failures;
    }
  }
  return pct(failures, attempts);
}

inline EvalReport compute_metrics(const std::vector<AnswerRecord>& records,
                                  const std::vector<TemporalQuestion>& questions) {
  std::map<std::string, const TemporalQuestion*> by_id;
  for (const auto& q : questions) {
    if (!by_id.emplace(q.question_id, &q).second) {
      throw MismatchError("duplicate question id " + q.question_id);
    }
  }
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!by_id.count(r.question_id)) {
      throw MismatchError("record for unknown question " + r.question_id);
    }
    if (!seen.insert(r.question_id).second) {
      throw MismatchError("duplicate record for question " + r.question_id);
    }
  }
  if (records.size() != questions.size()) {
    for (const auto& q : questions) {
      if (!seen.count(q.question_id)) {
        throw MismatchError("missing record for question " + q.question_id);
      }
    }
  }

  EvalReport rep;
  int correct_ta = 0, correct_tp = 0, correct_ti = 0;
  int unans_predictions = 0, unans_correct_of_predicted = 0;
  int unans_gold = 0, unans_correct_of_gold = 0;

  for (const auto& r : records) {
    const TemporalQuestion& q = *by_id.at(r.question_id);
    const bool correct = r.predicted == q.gold;
    switch (q.qtype) {
      case QType::TA:
        ++rep.count_ta;
        correct_ta += correct;
        break;
      case QType::TP:
        ++rep.count_tp;
        correct_tp += correct;
        break;
      case QType::TI:
        ++rep.count_ti;
        correct_ti += correct;
        break;
    }
    const auto unans_idx = tel::unanswerable_index(q.options);
    const bool predicted_unans = unans_idx && r.predicted == *unans_idx;
    if (predicted_unans) {
      ++unans_predictions;
      unans_correct_of_predicted += correct;
    }
    if (q.gold_unanswerable) {
      ++unans_gold;
      unans_correct_of_gold += correct;
    }
    for (const auto& f : r.flags) ++rep.flag_counts[f];
    for (const auto& a : r.attempts) {
      rep.failure_present = true;
      ++rep.generation_attempts;
      if (a.failed()) ++rep.generation_failures;
    }
    if (rep.strategy.empty()) {
      rep.strategy = to_string(r.strategy);
    } else if (rep.strategy != to_string(r.strategy)) {
      rep.strategy = "mixed";
    }
  }

  rep.acc_ta = pct(correct_ta, rep.count_ta);
  rep.acc_tp = pct(correct_tp, rep.count_tp);
  rep.acc_ti = pct(correct_ti, rep.count_ti);
  rep.acc_overall = pct(correct_ta + correct_tp + correct_ti, rep.total());
  rep.unans_precision = pct(unans_correct_of_predicted, unans_predictions);
  rep.unans_recall = pct(unans_correct_of_gold, unans_gold);
  const double p = rep.unans_precision, r = rep.unans_recall;
  rep.unans_f1 = (p + r) > 0 ? round_pct(2 * p * r / (p + r)) : 0.0;
  rep.failure_pct = pct(rep.generation_failures, rep.generation_attempts);
  return rep;
}

// --- rendering --------------------------------------------------------------

enum class ReportFormat { text, json, csv };

inline ReportFormat report_format_from_string(const std::string& s) {
  if (s == "text") return ReportFormat::text;
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw ConfigError("unknown report format '" + s + "'");
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j{
      {"counts", {{"ta", r.count_ta}, {"tp", r.count_tp}, {"ti", r.count_ti}, {"total", r.total()}}},
      {"accuracy",
       {{"ta", r.acc_ta}, {"tp", r.acc_tp}, {"ti", r.acc_ti}, {"overall", r.acc_overall}}},
      {"unanswerable",
       {{"precision", r.unans_precision}, {"recall", r.unans_recall}, {"f1", r.unans_f1}}},
      {"execution_failures",
       {{"present", r.failure_present},
        {"pct", r.failure_pct},
        {"failures", r.generation_failures},
        {"attempts", r.generation_attempts}}},
      {"flags", r.flag_counts},
      {"strategy", r.strategy}};
  if (!r.generated_at.empty()) j["generated_at"] = r.generated_at;
  return j;
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.count_ta = j.at("counts").at("ta").get<int>();
  r.count_tp = j.at("counts").at("tp").get<int>();
  r.count_ti = j.at("counts").at("ti").get<int>();
  r.acc_ta = j.at("accuracy").at("ta").get<double>();
  r.acc_tp = j.at("accuracy").at("tp").get<double>();
  r.acc_ti = j.at("accuracy").at("ti").get<double>();
  r.acc_overall = j.at("accuracy").at("overall").get<double>();
  r.unans_precision = j.at("unanswerable").at("precision").get<double>();
  r.unans_recall = j.at("unanswerable").at("recall").get<double>();
  r.unans_f1 = j.at("unanswerable").at("f1").get<double>();
  r.failure_present = j.at("execution_failures").at("present").get<bool>();
  r.failure_pct = j.at("execution_failures").at("pct").get<double>();
  r.generation_failures = j.at("execution_failures").at("failures").get<int>();
  r.generation_attempts = j.at("execution_failures").at("attempts").get<int>();
  r.flag_counts = j.value("flags", std::map<std::string, int>{});
  r.strategy = j.value("strategy", std::string());
  r.generated_at = j.value("generated_at", std::string());
  return r;
}

// Fixed column order: TA, TP, TI, Overall, then P, R, F1.
inline std::string render_report(const EvalReport& r, ReportFormat format) {
  if (format == ReportFormat::json) {
    return to_json(r).dump(2) + "\n";
  }
  if (format == ReportFormat::csv) {
    std::string out =
        "ta_count,tp_count,ti_count,total,"
        "ta_accuracy,tp_accuracy,ti_accuracy,overall_accuracy,"
        "unanswerable_precision,unanswerable_recall,unanswerable_f1,"
        "failure_pct\n";
    out += std::to_string(r.count_ta) + "," + std::to_string(r.count_tp) + "," +
           std::to_string(r.count_ti) + "," + std::to_string(r.total()) + "," +
           format_pct(r.acc_ta) + "," + format_pct(r.acc_tp) + "," +
           format_pct(r.acc_ti) + "," + format_pct(r.acc_overall) + "," +
           format_pct(r.unans_precision) + "," + format_pct(r.unans_recall) +
           "," + format_pct(r.unans_f1) + "," +
           (r.failure_present ? format_pct(r.failure_pct) : std::string("")) +
           "\n";
    return out;
  }

  char line[160];
  std::string out;
  out += "temporal-qa report";
  if (!r.strategy.empty()) out += "  (strategy: " + r.strategy + ")";
  out += "\n=======================================================\n";
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %9s\n", "", "TA", "TP",
                "TI", "Overall");
  out += line;
  std::snprintf(line, sizeof(line), "%-10s %8d %8d %8d %9d\n", "count",
                r.count_ta, r.count_tp, r.count_ti, r.total());
  out += line;
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %9s\n", "accuracy",
                format_pct(r.acc_ta).c_str(), format_pct(r.acc_tp).c_str(),
                format_pct(r.acc_ti).c_str(), format_pct(r.acc_overall).c_str());
  out += line;
  out += "-------------------------------------------------------\n";
  std::snprintf(line, sizeof(line),
                "unanswerable  precision %s  recall %s  f1 %s\n",
                format_pct(r.unans_precision).c_str(),
                format_pct(r.unans_recall).c_str(),
                format_pct(r.unans_f1).c_str());
  out += line;
  if (r.failure_present) {
    std::snprintf(line, sizeof(line), "exec-failures %s (%d/%d generations)\n",
                  format_pct(r.failure_pct).c_str(), r.generation_failures,
                  r.generation_attempts);
    out += line;
  } else {
    out += "exec-failures n/a (no program generations)\n";
  }
  if (r.flag_counts.empty()) {
    out += "flags         none\n";
  } else {
    out += "flags        ";
    for (const auto& [flag, count] : r.flag_counts) {
      out += " " + flag + "=" + std::to_string(count);
    }
    out += "\n";
  }
  if (!r.generated_at.empty()) out += "generated-at  " + r.generated_at + "\n";
  return out;
}

}  // namespace tempora

#endif  // TEMPORA_METRICS_HPP
