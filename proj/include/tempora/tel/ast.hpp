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

#ifndef TEMPORA_TEL_AST_HPP
#define TEMPORA_TEL_AST_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tempora/calendar.hpp"

// TEL — a straight-line, typed temporal expression language. A program is a
// sequence of single-assignment let-bindings followed by one terminal
// `answer` expression. No loops, no recursion, no user functions.

namespace tempora::tel {

enum class TelErrorKind { parse, type, name, domain, budget };

inline const char* to_string(TelErrorKind k) {
  switch (k) {
    case TelErrorKind::parse: return "ParseError";
    case TelErrorKind::type: return "TypeError";
    case TelErrorKind::name: return "NameError";
    case TelErrorKind::domain: return "DomainError";
    case TelErrorKind::budget: return "BudgetError";
  }
  return "?";
}

struct TelError {
  TelErrorKind kind = TelErrorKind::parse;
  int line = 0;
  int column = 0;
  std::string message;

  std::string describe() const {
    return std::string(to_string(kind)) + " at line " + std::to_string(line) +
           ", column " + std::to_string(column) + ": " + message;
  }
};

class TelException : public std::exception {
 public:
  explicit TelException(TelError e) : error_(std::move(e)), what_(error_.describe()) {}
  const TelError& error() const { return error_; }
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  TelError error_;
  std::string what_;
};

[[noreturn]] inline void fail(TelErrorKind kind, int line, int column,
                              const std::string& message) {
  throw TelException(TelError{kind, line, column, message});
}

// Static types. `integer` and `weekday` exist only as builtin-argument
// literals; a binding or the terminal must produce one of the five runtime
// value types.
enum class Type { date, duration, interval, boolean, text, integer, weekday };

inline const char* to_string(Type t) {
  switch (t) {
    case Type::date: return "date";
    case Type::duration: return "duration";
    case Type::interval: return "interval";
    case Type::boolean: return "boolean";
    case Type::text: return "text";
    case Type::integer: return "integer";
    case Type::weekday: return "weekday";
  }
  return "?";
}

// Runtime values.
struct Value {
  std::variant<CalDate, Duration, DateInterval, bool, std::string> v;

  bool operator==(const Value&) const = default;

  Type type() const {
    switch (v.index()) {
      case 0: return Type::date;
      case 1: return Type::duration;
      case 2: return Type::interval;
      case 3: return Type::boolean;
      default: return Type::text;
    }
  }
};

inline std::string to_string(const Value& val) {
  struct Printer {
    std::string operator()(const CalDate& d) const { return to_iso(d); }
    std::string operator()(const Duration& d) const { return tempora::to_string(d); }
    std::string operator()(const DateInterval& iv) const { return tempora::to_string(iv); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
  };
  return std::visit(Printer{}, val.v);
}

enum class DurationUnit { days, weeks, months, years };

inline const char* unit_word(DurationUnit u, bool plural) {
  switch (u) {
    case DurationUnit::days: return plural ? "days" : "day";
    case DurationUnit::weeks: return plural ? "weeks" : "week";
    case DurationUnit::months: return plural ? "months" : "month";
    case DurationUnit::years: return plural ? "years" : "year";
  }
  return "?";
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct DateLit {
  int year, month, day;  // validated at evaluation, not parse
};
struct DurationLit {
  std::int64_t amount;
  DurationUnit unit;
};
struct StringLit {
  std::string text;
};
struct IntLit {
  std::int64_t value;
};
struct WeekdayLit {
  Weekday day;
};
struct NameRef {
  std::string name;
};
struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};
struct IfExpr {
  ExprPtr cond, then_branch, else_branch;
};

struct Expr {
  std::variant<DateLit, DurationLit, StringLit, IntLit, WeekdayLit, NameRef,
               Call, IfExpr>
      node;
  int line = 0;
  int column = 0;
};

struct Binding {
  std::string name;
  ExprPtr value;
  int line = 0;
  std::string source;  // the binding's source text, kept for the trace
};

struct Program {
  std::vector<Binding> bindings;
  ExprPtr terminal;
  int terminal_line = 0;
  std::string terminal_source;
};

// --- pretty printer -------------------------------------------------------

inline std::string to_source(const Expr& e);

inline std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string to_source(const Expr& e) {
  struct Printer {
    std::string operator()(const DateLit& d) const {
      return "date(" + std::to_string(d.year) + ", " + std::to_string(d.month) +
             ", " + std::to_string(d.day) + ")";
    }
    std::string operator()(const DurationLit& d) const {
      return std::to_string(d.amount) + " " +
             unit_word(d.unit, d.amount != 1 && d.amount != -1);
    }
    std::string operator()(const StringLit& s) const { return escape_string(s.text); }
    std::string operator()(const IntLit& i) const { return std::to_string(i.value); }
    std::string operator()(const WeekdayLit& w) const { return weekday_code(w.day); }
    std::string operator()(const NameRef& n) const { return n.name; }
    std::string operator()(const Call& c) const {
      std::string out = c.callee + "(";
      for (size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ", ";
        out += to_source(*c.args[i]);
      }
      return out + ")";
    }
    std::string operator()(const IfExpr& f) const {
      return "if " + to_source(*f.cond) + " then " + to_source(*f.then_branch) +
             " else " + to_source(*f.else_branch);
    }
  };
  return std::visit(Printer{}, e.node);
}

inline std::string to_source(const Program& p) {
  std::string out;
  for (const auto& b : p.bindings) {
    out += "let " + b.name + " := " + to_source(*b.value) + "\n";
  }
  out += "answer " + to_source(*p.terminal) + "\n";
  return out;
}

// Structural equality, ignoring source locations. Used by round-trip tests.
inline bool same_structure(const Expr& a, const Expr& b);

inline bool same_structure(const ExprPtr& a, const ExprPtr& b) {
  return same_structure(*a, *b);
}

inline bool same_structure(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Cmp {
    const Expr& rhs;
    bool operator()(const DateLit& x) const {
      const auto& y = std::get<DateLit>(rhs.node);
      return x.year == y.year && x.month == y.month && x.day == y.day;
    }
    bool operator()(const DurationLit& x) const {
      const auto& y = std::get<DurationLit>(rhs.node);
      return x.amount == y.amount && x.unit == y.unit;
    }
    bool operator()(const StringLit& x) const {
      return x.text == std::get<StringLit>(rhs.node).text;
    }
    bool operator()(const IntLit& x) const {
      return x.value == std::get<IntLit>(rhs.node).value;
    }
    bool operator()(const WeekdayLit& x) const {
      return x.day == std::get<WeekdayLit>(rhs.node).day;
    }
    bool operator()(const NameRef& x) const {
      return x.name == std::get<NameRef>(rhs.node).name;
    }
    bool operator()(const Call& x) const {
      const auto& y = std::get<Call>(rhs.node);
      if (x.callee != y.callee || x.args.size() != y.args.size()) return false;
      for (size_t i = 0; i < x.args.size(); ++i) {
        if (!same_structure(x.args[i], y.args[i])) return false;
      }
      return true;
    }
    bool operator()(const IfExpr& x) const {
      const auto& y = std::get<IfExpr>(rhs.node);
      return same_structure(x.cond, y.cond) &&
             same_structure(x.then_branch, y.then_branch) &&
             same_structure(x.else_branch, y.else_branch);
    }
  };
  return std::visit(Cmp{b}, a.node);
}

inline bool same_structure(const Program& a, const Program& b) {
  if (a.bindings.size() != b.bindings.size()) return false;
  for (size_t i = 0; i < a.bindings.size(); ++i) {
    if (a.bindings[i].name != b.bindings[i].name) return false;
    if (!same_structure(a.bindings[i].value, b.bindings[i].value)) return false;
  }
  return same_structure(a.terminal, b.terminal);
}

}  // namespace tempora::tel

#endif  // TEMPORA_TEL_AST_HPP
