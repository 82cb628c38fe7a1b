#ifndef TEMPORA_TESTS_PROGGEN_HPP
#define TEMPORA_TESTS_PROGGEN_HPP

#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "support/oracle.hpp"
#include "tempora/tel/interp.hpp"

// Random well-typed TEL programs over dates in 2019-2021 using the mix
// {add/sub of relative deltas, diff_days, next_weekday, week/month ranges,
// before, if}, plus an interpreter that runs the same AST through the
// day-enumeration oracle instead of the library's calendar arithmetic.

namespace proggen {

using tempora::tel::Expr;
using tempora::tel::ExprPtr;
using tempora::tel::Program;

struct OracleDuration {
  std::int64_t days = 0;
  int months = 0;
  int years = 0;
};

using OracleValue =
    std::variant<oracle::Date, OracleDuration, oracle::Interval, bool>;

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Program next_program() {
    names_.clear();
    Program prog;
    const int n = pick(1, 6);
    for (int i = 0; i < n; ++i) {
      tempora::tel::Type t = pick_binding_type();
      tempora::tel::Binding b;
      b.name = "v" + std::to_string(i);
      b.value = gen(t, 3);
      prog.bindings.push_back(std::move(b));
      names_.push_back({prog.bindings.back().name, t});
    }
    prog.terminal = gen(pick_binding_type(), 3);
    return prog;
  }

 private:
  using Type = tempora::tel::Type;

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  Type pick_binding_type() {
    switch (pick(0, 3)) {
      case 0: return Type::date;
      case 1: return Type::duration;
      case 2: return Type::interval;
      default: return Type::boolean;
    }
  }

  ExprPtr make(Expr e) { return std::make_shared<Expr>(std::move(e)); }

  ExprPtr date_literal() {
    const int y = pick(2019, 2021);
    const int m = pick(1, 12);
    const int d = pick(1, oracle::month_len(y, m));
    return make(Expr{tempora::tel::DateLit{y, m, d}});
  }

  ExprPtr name_of(Type t) {
    std::vector<const std::string*> matches;
    for (const auto& [name, type] : names_) {
      if (type == t) matches.push_back(&name);
    }
    if (matches.empty()) return nullptr;
    return make(Expr{
        tempora::tel::NameRef{*matches[static_cast<size_t>(pick(
            0, static_cast<int>(matches.size()) - 1))]}});
  }

  ExprPtr duration_literal() {
    switch (pick(0, 2)) {
      case 0:
        return make(Expr{tempora::tel::DurationLit{
            pick(-60, 60), tempora::tel::DurationUnit::days}});
      case 1:
        return make(Expr{tempora::tel::DurationLit{
            pick(-8, 8), tempora::tel::DurationUnit::weeks}});
      default:
        return make(Expr{tempora::tel::DurationLit{
            pick(-6, 6), tempora::tel::DurationUnit::months}});
    }
  }

  ExprPtr call(std::string name, std::vector<ExprPtr> args) {
    return make(Expr{tempora::tel::Call{std::move(name), std::move(args)}});
  }

  ExprPtr gen(Type t, int depth) {
    if (depth <= 1) return leaf(t);
    if (pick(0, 9) == 0) {
      // occasional conditional
      return make(Expr{tempora::tel::IfExpr{gen(Type::boolean, depth - 1),
                                            gen(t, depth - 1),
                                            gen(t, depth - 1)}});
    }
    switch (t) {
      case Type::date: {
        switch (pick(0, 3)) {
          case 0: return leaf(Type::date);
          case 1:
            return call(pick(0, 1) ? "add" : "sub",
                        {gen(Type::date, depth - 1), duration_literal()});
          default: {
            int ord = pick(-3, 3);
            if (ord == 0) ord = 1;
            return call("next_weekday",
                        {gen(Type::date, depth - 1),
                         make(Expr{tempora::tel::WeekdayLit{
                             tempora::Weekday{pick(1, 7)}}}),
                         make(Expr{tempora::tel::IntLit{ord}})});
          }
        }
      }
      case Type::duration:
        if (pick(0, 1) == 0) return leaf(Type::duration);
        return call("diff_days",
                    {gen(Type::date, depth - 1), gen(Type::date, depth - 1)});
      case Type::interval:
        return call(pick(0, 1) ? "week_range" : "month_range",
                    {gen(Type::date, depth - 1)});
      case Type::boolean:
        switch (pick(0, 2)) {
          case 0:
            return call("before", {gen(Type::date, depth - 1),
                                   gen(Type::date, depth - 1)});
          case 1:
            return call("before", {gen(Type::interval, depth - 1),
                                   gen(Type::interval, depth - 1)});
          default:
            return call("before", {gen(Type::date, depth - 1),
                                   gen(Type::interval, depth - 1)});
        }
      default: return leaf(t);
    }
  }

  ExprPtr leaf(Type t) {
    if (auto n = name_of(t); n && pick(0, 1) == 0) return n;
    switch (t) {
      case Type::date: return date_literal();
      case Type::duration: return duration_literal();
      case Type::interval: return call("week_range", {date_literal()});
      case Type::boolean:
        return call("before", {date_literal(), date_literal()});
      default: return date_literal();
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::pair<std::string, Type>> names_;
};

// Interprets the AST through the oracle calendar only.
class OracleInterp {
 public:
  OracleValue eval(const Expr& e) {
    if (const auto* d = std::get_if<tempora::tel::DateLit>(&e.node)) {
      return oracle::Date{d->year, d->month, d->day};
    }
    if (const auto* d = std::get_if<tempora::tel::DurationLit>(&e.node)) {
      switch (d->unit) {
        case tempora::tel::DurationUnit::days:
          return OracleDuration{d->amount, 0, 0};
        case tempora::tel::DurationUnit::weeks:
          return OracleDuration{d->amount * 7, 0, 0};
        case tempora::tel::DurationUnit::months:
          return OracleDuration{0, static_cast<int>(d->amount), 0};
        case tempora::tel::DurationUnit::years:
          return OracleDuration{0, 0, static_cast<int>(d->amount)};
      }
    }
    if (const auto* n = std::get_if<tempora::tel::NameRef>(&e.node)) {
      return locals_.at(n->name);
    }
    if (const auto* f = std::get_if<tempora::tel::IfExpr>(&e.node)) {
      return std::get<bool>(eval(*f->cond)) ? eval(*f->then_branch)
                                            : eval(*f->else_branch);
    }
    const auto& c = std::get<tempora::tel::Call>(e.node);
    return eval_call(c);
  }

  OracleValue run(const Program& p) {
    locals_.clear();
    for (const auto& b : p.bindings) locals_[b.name] = eval(*b.value);
    return eval(*p.terminal);
  }

 private:
  OracleValue eval_call(const tempora::tel::Call& c) {
    const std::string& f = c.callee;
    if (f == "add" || f == "sub") {
      auto base = std::get<oracle::Date>(eval(*c.args[0]));
      auto d = std::get<OracleDuration>(eval(*c.args[1]));
      const int sign = f == "sub" ? -1 : 1;
      return oracle::add_relative(base, sign * d.years, sign * d.months,
                                  sign * d.days);
    }
    if (f == "diff_days") {
      auto a = std::get<oracle::Date>(eval(*c.args[0]));
      auto b = std::get<oracle::Date>(eval(*c.args[1]));
      return OracleDuration{oracle::diff_days(a, b), 0, 0};
    }
    if (f == "next_weekday") {
      auto a = std::get<oracle::Date>(eval(*c.args[0]));
      auto wd = std::get<tempora::tel::WeekdayLit>(c.args[1]->node);
      auto ord = std::get<tempora::tel::IntLit>(c.args[2]->node);
      return oracle::next_weekday(a, static_cast<int>(wd.day),
                                  static_cast<int>(ord.value));
    }
    if (f == "week_range") {
      return oracle::week_range(std::get<oracle::Date>(eval(*c.args[0])));
    }
    if (f == "month_range") {
      return oracle::month_range(std::get<oracle::Date>(eval(*c.args[0])));
    }
    if (f == "before") {
      auto end_of = [this, &c](size_t i, bool want_end) -> oracle::Date {
        OracleValue v = eval(*c.args[i]);
        if (const auto* d = std::get_if<oracle::Date>(&v)) return *d;
        const auto& iv = std::get<oracle::Interval>(v);
        return want_end ? iv.end : iv.start;
      };
      oracle::Date a_end = end_of(0, true);
      oracle::Date b_start = end_of(1, false);
      return a_end < b_start;
    }
    throw std::logic_error("oracle interp: unexpected call " + f);
  }

  std::map<std::string, OracleValue> locals_;
};

inline tempora::tel::Value to_tel(const OracleValue& v) {
  if (const auto* d = std::get_if<oracle::Date>(&v)) {
    return tempora::tel::Value{oracle::to_lib(*d)};
  }
  if (const auto* d = std::get_if<OracleDuration>(&v)) {
    return tempora::tel::Value{tempora::Duration{d->days, d->months, d->years}};
  }
  if (const auto* iv = std::get_if<oracle::Interval>(&v)) {
    return tempora::tel::Value{tempora::DateInterval{oracle::to_lib(iv->start),
                                                     oracle::to_lib(iv->end)}};
  }
  return tempora::tel::Value{std::get<bool>(v)};
}

}  // namespace proggen

#endif  // TEMPORA_TESTS_PROGGEN_HPP
