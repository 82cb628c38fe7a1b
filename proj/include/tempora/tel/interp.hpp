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

#ifndef TEMPORA_TEL_INTERP_HPP
#define TEMPORA_TEL_INTERP_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tempora/digest.hpp"
#include "tempora/tel/ast.hpp"
#include "tempora/tel/parser.hpp"

namespace tempora::tel {

inline constexpr int kDefaultBudget = 256;

using TypeEnv = std::map<std::string, Type>;
using ValueEnv = std::map<std::string, Value>;

struct TypedProgram {
  Program program;
  std::unordered_map<const Expr*, Type> types;
};

namespace detail {

struct Signature {
  std::vector<Type> params;
  Type result;
};

inline const std::map<std::string, std::vector<Signature>>& builtin_table() {
  using T = Type;
  static const std::map<std::string, std::vector<Signature>> table = {
      {"add", {{{T::date, T::duration}, T::date},
               {{T::duration, T::duration}, T::duration}}},
      {"sub", {{{T::date, T::duration}, T::date},
               {{T::duration, T::duration}, T::duration}}},
      {"diff_days", {{{T::date, T::date}, T::duration}}},
      {"diff_months", {{{T::date, T::date}, T::duration}}},
      {"next_weekday", {{{T::date, T::weekday, T::integer}, T::date}}},
      {"week_range", {{{T::date}, T::interval}}},
      {"month_range", {{{T::date}, T::interval}}},
      {"interval", {{{T::date, T::date}, T::interval}}},
      {"allen", {{{T::interval, T::interval}, T::text}}},
      {"before", {{{T::date, T::date}, T::boolean},
                  {{T::date, T::interval}, T::boolean},
                  {{T::interval, T::date}, T::boolean},
                  {{T::interval, T::interval}, T::boolean}}},
      {"after", {{{T::date, T::date}, T::boolean},
                 {{T::date, T::interval}, T::boolean},
                 {{T::interval, T::date}, T::boolean},
                 {{T::interval, T::interval}, T::boolean}}},
      {"same_day", {{{T::date, T::date}, T::boolean}}},
      {"min", {{{T::date, T::date}, T::date}}},
      {"max", {{{T::date, T::date}, T::date}}},
  };
  return table;
}

inline std::string signature_help(const std::string& name,
                                  const std::vector<Signature>& sigs) {
  std::string out;
  for (const auto& sig : sigs) {
    if (!out.empty()) out += " or ";
    out += name + "(";
    for (size_t i = 0; i < sig.params.size(); ++i) {
      if (i) out += ", ";
      out += to_string(sig.params[i]);
    }
    out += ")";
  }
  return out;
}

class Checker {
 public:
  explicit Checker(const TypeEnv& env) : env_(env) {}

  TypedProgram check(Program prog) {
    TypedProgram typed;
    for (const auto& b : prog.bindings) {
      if (locals_.count(b.name) || env_.count(b.name)) {
        fail(TelErrorKind::type, b.line, 1,
             "name '" + b.name + "' is already bound; TEL has no shadowing");
      }
      Type t = infer(*b.value, typed);
      require_value_type(t, *b.value, "a let binding");
      locals_[b.name] = t;
    }
    Type t = infer(*prog.terminal, typed);
    require_value_type(t, *prog.terminal, "the answer expression");
    typed.program = std::move(prog);
    return typed;
  }

 private:
  static void require_value_type(Type t, const Expr& e, const std::string& what) {
    if (t == Type::integer || t == Type::weekday) {
      fail(TelErrorKind::type, e.line, e.column,
           std::string(to_string(t)) + " literals may only appear as builtin "
           "arguments, not as " + what);
    }
  }

  Type remember(const Expr& e, Type t, TypedProgram& out) {
    out.types[&e] = t;
    return t;
  }

  Type infer(const Expr& e, TypedProgram& out) {
    struct Infer {
      Checker& self;
      const Expr& e;
      TypedProgram& out;
      Type operator()(const DateLit&) const { return Type::date; }
      Type operator()(const DurationLit&) const { return Type::duration; }
      Type operator()(const StringLit&) const { return Type::text; }
      Type operator()(const IntLit&) const { return Type::integer; }
      Type operator()(const WeekdayLit&) const { return Type::weekday; }
      Type operator()(const NameRef& n) const {
        auto it = self.locals_.find(n.name);
        if (it != self.locals_.end()) return it->second;
        auto eit = self.env_.find(n.name);
        if (eit != self.env_.end()) return eit->second;
        fail(TelErrorKind::name, e.line, e.column,
             "unbound name '" + n.name + "'");
      }
      Type operator()(const Call& c) const { return self.infer_call(e, c, out); }
      Type operator()(const IfExpr& f) const {
        Type ct = self.infer(*f.cond, out);
        if (ct != Type::boolean) {
          fail(TelErrorKind::type, f.cond->line, f.cond->column,
               "if condition must be boolean, got " + std::string(to_string(ct)));
        }
        Type tt = self.infer(*f.then_branch, out);
        Type et = self.infer(*f.else_branch, out);
        if (tt != et) {
          fail(TelErrorKind::type, e.line, e.column,
               "if branches must have the same type, got " +
                   std::string(to_string(tt)) + " and " +
                   std::string(to_string(et)));
        }
        return tt;
      }
    };
    Type t = std::visit(Infer{*this, e, out}, e.node);
    return remember(e, t, out);
  }

  Type infer_call(const Expr& e, const Call& c, TypedProgram& out) {
    const auto& table = builtin_table();
    auto it = table.find(c.callee);
    if (it == table.end()) {
      fail(TelErrorKind::name, e.line, e.column,
           "unknown function '" + c.callee + "'");
    }
    std::vector<Type> arg_types;
    arg_types.reserve(c.args.size());
    for (const auto& a : c.args) arg_types.push_back(infer(*a, out));
    for (const auto& sig : it->second) {
      if (sig.params == arg_types) {
        if (c.callee == "next_weekday") {
          const auto& ord = std::get<IntLit>(c.args[2]->node);
          if (ord.value == 0) {
            fail(TelErrorKind::type, c.args[2]->line, c.args[2]->column,
                 "next_weekday ordinal must be non-zero");
          }
        }
        return sig.result;
      }
    }
    std::string got = c.callee + "(";
    for (size_t i = 0; i < arg_types.size(); ++i) {
      if (i) got += ", ";
      got += to_string(arg_types[i]);
    }
    got += ")";
    fail(TelErrorKind::type, e.line, e.column,
         "no builtin matches " + got + "; expected " +
             signature_help(c.callee, it->second));
  }

  const TypeEnv& env_;
  std::map<std::string, Type> locals_;
};

}  // namespace detail

inline TypedProgram typecheck(Program prog, const TypeEnv& env = {}) {
  return detail::Checker(env).check(std::move(prog));
}

inline TypeEnv type_env_of(const ValueEnv& env) {
  TypeEnv out;
  for (const auto& [name, value] : env) out[name] = value.type();
  return out;
}

// --- evaluation ------------------------------------------------------------

struct TraceStep {
  std::string name;
  std::string source;
  Value value;
};
using Trace = std::vector<TraceStep>;

inline std::string trace_digest(const Trace& trace) {
  std::string blob;
  for (const auto& step : trace) {
    blob += step.name;
    blob += '=';
    blob += to_string(step.value);
    blob += '\n';
  }
  return digest_hex(blob);
}

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const ValueEnv& env) : env_(env) {}

  Value eval(const Expr& e) {
    struct Eval {
      Evaluator& self;
      const Expr& e;
      Value operator()(const DateLit& d) const {
        if (!is_valid_date(d.year, d.month, d.day)) {
          fail(TelErrorKind::domain, e.line, e.column,
               "date(" + std::to_string(d.year) + ", " + std::to_string(d.month) +
                   ", " + std::to_string(d.day) + ") is not a real date");
        }
        return Value{CalDate{d.year, d.month, d.day}};
      }
      Value operator()(const DurationLit& d) const {
        switch (d.unit) {
          case DurationUnit::days: return Value{Duration::of_days(d.amount)};
          case DurationUnit::weeks: return Value{Duration::of_days(d.amount * 7)};
          case DurationUnit::months:
            return Value{Duration::of_months(static_cast<int>(d.amount))};
          case DurationUnit::years:
            return Value{Duration::of_years(static_cast<int>(d.amount))};
        }
        return Value{Duration{}};
      }
      Value operator()(const StringLit& s) const { return Value{s.text}; }
      Value operator()(const IntLit&) const {
        fail(TelErrorKind::domain, e.line, e.column,
             "integer literal has no runtime value");
      }
      Value operator()(const WeekdayLit&) const {
        fail(TelErrorKind::domain, e.line, e.column,
             "weekday literal has no runtime value");
      }
      Value operator()(const NameRef& n) const {
        auto it = self.locals_.find(n.name);
        if (it != self.locals_.end()) return it->second;
        auto eit = self.env_.find(n.name);
        if (eit != self.env_.end()) return eit->second;
        fail(TelErrorKind::name, e.line, e.column, "unbound name '" + n.name + "'");
      }
      Value operator()(const Call& c) const { return self.eval_call(e, c); }
      Value operator()(const IfExpr& f) const {
        bool cond = std::get<bool>(self.eval(*f.cond).v);
        return cond ? self.eval(*f.then_branch) : self.eval(*f.else_branch);
      }
    };
    return std::visit(Eval{*this, e}, e.node);
  }

  void bind(const std::string& name, Value v) { locals_[name] = std::move(v); }

 private:
  // date and interval coerce to intervals for before/after: a date d is the
  // one-day interval [d, d].
  static DateInterval as_interval(const Value& v) {
    if (const auto* d = std::get_if<CalDate>(&v.v)) return DateInterval{*d, *d};
    return std::get<DateInterval>(v.v);
  }

  Value eval_call(const Expr& e, const Call& c) {
    std::vector<Value> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) {
      // weekday/integer arguments are read syntactically below
      if (std::holds_alternative<WeekdayLit>(a->node) ||
          std::holds_alternative<IntLit>(a->node)) {
        args.push_back(Value{std::string()});
      } else {
        args.push_back(eval(*a));
      }
    }
    try {
      return apply(e, c, args);
    } catch (const TelException&) {
      throw;
    } catch (const DomainError& ex) {
      fail(TelErrorKind::domain, e.line, e.column, ex.what());
    } catch (const ContractError& ex) {
      fail(TelErrorKind::domain, e.line, e.column, ex.what());
    }
  }

  Value apply(const Expr& e, const Call& c, const std::vector<Value>& args) {
    const std::string& f = c.callee;
    auto date_at = [&](size_t i) { return std::get<CalDate>(args[i].v); };
    auto dur_at = [&](size_t i) { return std::get<Duration>(args[i].v); };
    auto iv_at = [&](size_t i) { return std::get<DateInterval>(args[i].v); };

    if (f == "add" || f == "sub") {
      const bool neg = f == "sub";
      if (std::holds_alternative<CalDate>(args[0].v)) {
        Duration d = dur_at(1);
        if (neg) d = -d;
        return Value{add_relative(date_at(0),
                                  RelativeDelta{d.years, d.months, d.days})};
      }
      Duration d = dur_at(1);
      return Value{neg ? dur_at(0) - d : dur_at(0) + d};
    }
    if (f == "diff_days") return Value{diff_days(date_at(0), date_at(1))};
    if (f == "diff_months") {
      const CalDate a = date_at(0), b = date_at(1);
      std::int64_t m = (static_cast<std::int64_t>(b.year) * 12 + b.month) -
                       (static_cast<std::int64_t>(a.year) * 12 + a.month);
      // whole months only: shrink toward zero until the shifted date does
      // not overshoot b
      if (b >= a) {
        while (m > 0 && add_relative(a, {0, static_cast<int>(m), 0}) > b) --m;
      } else {
        while (m < 0 && add_relative(a, {0, static_cast<int>(m), 0}) < b) ++m;
      }
      return Value{Duration::of_months(static_cast<int>(m))};
    }
    if (f == "next_weekday") {
      const auto& wd = std::get<WeekdayLit>(c.args[1]->node);
      const auto& ord = std::get<IntLit>(c.args[2]->node);
      return Value{next_weekday(date_at(0), wd.day, static_cast<int>(ord.value))};
    }
    if (f == "week_range") return Value{week_range(date_at(0))};
    if (f == "month_range") return Value{month_range(date_at(0))};
    if (f == "interval") return Value{make_interval(date_at(0), date_at(1))};
    if (f == "allen") {
      return Value{std::string(to_string(allen_relation(iv_at(0), iv_at(1))))};
    }
    if (f == "before" || f == "after") {
      DateInterval a = as_interval(args[0]), b = as_interval(args[1]);
      if (f == "after") std::swap(a, b);
      return Value{day_number(a.end) < day_number(b.start)};
    }
    if (f == "same_day") return Value{date_at(0) == date_at(1)};
    if (f == "min") return Value{std::min(date_at(0), date_at(1))};
    if (f == "max") return Value{std::max(date_at(0), date_at(1))};
    fail(TelErrorKind::name, e.line, e.column, "unknown function '" + f + "'");
  }

  const ValueEnv& env_;
  std::map<std::string, Value> locals_;
};

}  // namespace detail

// Executes bindings in order, appending each to `trace` as it completes, so
// the trace holds the executed prefix if an error is thrown.
inline Value evaluate_into(const TypedProgram& typed, const ValueEnv& env,
                           int budget, Trace& trace) {
  detail::Evaluator ev(env);
  int steps = 0;
  for (const auto& b : typed.program.bindings) {
    if (++steps > budget) {
      fail(TelErrorKind::budget, b.line, 1,
           "step budget of " + std::to_string(budget) + " bindings exceeded");
    }
    Value v = ev.eval(*b.value);
    trace.push_back(TraceStep{b.name, b.source, v});
    ev.bind(b.name, v);
  }
  return ev.eval(*typed.program.terminal);
}

inline std::pair<Value, Trace> evaluate(const TypedProgram& typed,
                                        const ValueEnv& env,
                                        int budget = kDefaultBudget) {
  Trace trace;
  Value v = evaluate_into(typed, env, budget, trace);
  return {std::move(v), std::move(trace)};
}

// Parse + typecheck + evaluate without throwing TelException: errors come
// back as a value, alongside the executed trace prefix.
struct ExecResult {
  std::optional<Value> value;
  Trace trace;
  std::optional<TelError> error;

  bool ok() const { return value.has_value(); }
};

inline ExecResult execute(std::string_view source, const ValueEnv& env,
                          int budget = kDefaultBudget) {
  ExecResult result;
  try {
    TypedProgram typed = typecheck(parse_program(source), type_env_of(env));
    result.value = evaluate_into(typed, env, budget, result.trace);
  } catch (const TelException& ex) {
    result.error = ex.error();
  }
  return result;
}

}  // namespace tempora::tel

#endif  // TEMPORA_TEL_INTERP_HPP
