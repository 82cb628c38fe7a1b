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

#ifndef TEMPORA_TEL_PARSER_HPP
#define TEMPORA_TEL_PARSER_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tempora/tel/ast.hpp"

// Grammar:
//   program  := {binding} terminal
//   binding  := "let" IDENT ":=" expr NEWLINE
//   terminal := "answer" expr
//   expr     := literal | IDENT | call | "if" expr "then" expr "else" expr
//   call     := IDENT "(" [expr {"," expr}] ")"
//   literal  := DATE "date(y,m,d)" | DURATION "<n> days|weeks|months|years"
//             | STRING | INT | WEEKDAY "MO".."SU"
// "#" starts a line comment. Newlines inside unclosed parentheses are
// ignored, so a call may span lines; a binding otherwise ends at end of line.

namespace tempora::tel {

namespace lex {

enum class Tok {
  kw_let,
  kw_answer,
  kw_if,
  kw_then,
  kw_else,
  ident,
  integer,
  string,
  assign,   // :=
  lparen,
  rparen,
  comma,
  newline,
  eof,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t int_value = 0;
  int line = 1;
  int column = 1;
  size_t offset = 0;  // byte offset into the source
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  int paren_depth = 0;
  auto push = [&](Tok k, std::string text, size_t off, int ln, int cl,
                  std::int64_t iv = 0) {
    out.push_back(Token{k, std::move(text), iv, ln, cl, off});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '\n') {
      if (paren_depth == 0 &&
          (!out.empty() && out.back().kind != Tok::newline)) {
        push(Tok::newline, "\n", i, line, col);
      }
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == ' ' || c == '\t') {
      ++i;
      ++col;
      continue;
    }
    const int ln = line, cl = col;
    const size_t off = i;
    if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
      push(Tok::assign, ":=", off, ln, cl);
      i += 2;
      col += 2;
      continue;
    }
    if (c == '(') {
      ++paren_depth;
      push(Tok::lparen, "(", off, ln, cl);
      ++i;
      ++col;
      continue;
    }
    if (c == ')') {
      if (paren_depth > 0) --paren_depth;
      push(Tok::rparen, ")", off, ln, cl);
      ++i;
      ++col;
      continue;
    }
    if (c == ',') {
      push(Tok::comma, ",", off, ln, cl);
      ++i;
      ++col;
      continue;
    }
    if (c == '"') {
      std::string text;
      ++i;
      ++col;
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '\n') break;
        ++i;
        ++col;
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\' && i < src.size() && (src[i] == '"' || src[i] == '\\')) {
          text += src[i];
          ++i;
          ++col;
          continue;
        }
        text += d;
      }
      if (!closed) fail(TelErrorKind::parse, ln, cl, "unterminated string literal");
      push(Tok::string, std::move(text), off, ln, cl);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      size_t j = i + (c == '-' ? 1 : 0);
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string text(src.substr(i, j - i));
      std::int64_t v = 0;
      try {
        v = std::stoll(text);
      } catch (const std::exception&) {
        fail(TelErrorKind::parse, ln, cl, "integer literal out of range");
      }
      col += static_cast<int>(j - i);
      i = j;
      push(Tok::integer, std::move(text), off, ln, cl, v);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      Tok k = Tok::ident;
      if (text == "let") k = Tok::kw_let;
      else if (text == "answer") k = Tok::kw_answer;
      else if (text == "if") k = Tok::kw_if;
      else if (text == "then") k = Tok::kw_then;
      else if (text == "else") k = Tok::kw_else;
      push(k, std::move(text), off, ln, cl);
      continue;
    }
    fail(TelErrorKind::parse, ln, cl,
         std::string("unexpected character '") + c + "'");
  }
  if (!out.empty() && out.back().kind != Tok::newline) {
    push(Tok::newline, "\n", src.size(), line, col);
  }
  push(Tok::eof, "", src.size(), line, col);
  return out;
}

}  // namespace lex

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, std::vector<lex::Token> tokens)
      : src_(src), toks_(std::move(tokens)) {}

  Program parse() {
    Program prog;
    skip_newlines();
    while (at(lex::Tok::kw_let)) {
      prog.bindings.push_back(parse_binding());
      skip_newlines();
    }
    if (!at(lex::Tok::kw_answer)) {
      const auto& t = peek();
      fail(TelErrorKind::parse, t.line, t.column,
           "expected 'let' or 'answer', got " + describe(t));
    }
    const auto& answer_tok = peek();
    advance();
    const size_t start = peek().offset;
    prog.terminal = parse_expr();
    prog.terminal_line = answer_tok.line;
    prog.terminal_source = slice(start, peek().offset);
    expect_line_end("after the answer expression");
    skip_newlines();
    if (!at(lex::Tok::eof)) {
      const auto& t = peek();
      fail(TelErrorKind::parse, t.line, t.column,
           "unexpected content after the answer expression");
    }
    return prog;
  }

 private:
  const lex::Token& peek() const { return toks_[pos_]; }
  bool at(lex::Tok k) const { return peek().kind == k; }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  void skip_newlines() {
    while (at(lex::Tok::newline)) advance();
  }

  static std::string describe(const lex::Token& t) {
    switch (t.kind) {
      case lex::Tok::newline: return "end of line";
      case lex::Tok::eof: return "end of input";
      case lex::Tok::string: return "string literal";
      default: return "'" + t.text + "'";
    }
  }

  std::string slice(size_t from, size_t to) const {
    if (to > src_.size()) to = src_.size();
    if (from >= to) return "";
    std::string s(src_.substr(from, to - from));
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' ||
                          s.back() == ' ' || s.back() == '\t')) {
      s.pop_back();
    }
    return s;
  }

  void expect_line_end(const std::string& where) {
    if (at(lex::Tok::newline) || at(lex::Tok::eof)) {
      if (at(lex::Tok::newline)) advance();
      return;
    }
    const auto& t = peek();
    fail(TelErrorKind::parse, t.line, t.column,
         "expected end of line " + where + ", got " + describe(t));
  }

  Binding parse_binding() {
    const auto& let_tok = peek();
    advance();
    if (!at(lex::Tok::ident)) {
      const auto& t = peek();
      fail(TelErrorKind::parse, t.line, t.column,
           "expected a name after 'let', got " + describe(t));
    }
    Binding b;
    b.name = peek().text;
    b.line = let_tok.line;
    advance();
    if (!at(lex::Tok::assign)) {
      const auto& t = peek();
      fail(TelErrorKind::parse, t.line, t.column,
           "expected ':=' after 'let " + b.name + "', got " + describe(t));
    }
    advance();
    b.value = parse_expr();
    b.source = slice(let_tok.offset, peek().offset);
    expect_line_end("after the binding of '" + b.name + "'");
    return b;
  }

  ExprPtr make(Expr e) { return std::make_shared<Expr>(std::move(e)); }

  ExprPtr parse_expr() {
    if (at(lex::Tok::kw_if)) {
      const auto& tok = peek();
      advance();
      auto cond = parse_expr();
      require_kw(lex::Tok::kw_then, "'then'");
      auto then_branch = parse_expr();
      require_kw(lex::Tok::kw_else, "'else'");
      auto else_branch = parse_expr();
      return make(Expr{IfExpr{std::move(cond), std::move(then_branch),
                              std::move(else_branch)},
                       tok.line, tok.column});
    }
    return parse_primary();
  }

  void require_kw(lex::Tok k, const std::string& what) {
    if (!at(k)) {
      const auto& t = peek();
      fail(TelErrorKind::parse, t.line, t.column,
           "expected " + what + ", got " + describe(t));
    }
    advance();
  }

  ExprPtr parse_primary() {
    const auto& t = peek();
    switch (t.kind) {
      case lex::Tok::integer: {
        advance();
        // INT followed by a unit word is a duration literal
        if (at(lex::Tok::ident)) {
          auto unit = unit_from_word(peek().text);
          if (unit) {
            advance();
            return make(Expr{DurationLit{t.int_value, *unit}, t.line, t.column});
          }
        }
        return make(Expr{IntLit{t.int_value}, t.line, t.column});
      }
      case lex::Tok::string:
        advance();
        return make(Expr{StringLit{t.text}, t.line, t.column});
      case lex::Tok::ident:
        return parse_ident_or_call();
      default:
        fail(TelErrorKind::parse, t.line, t.column,
             "expected an expression, got " + describe(t));
    }
  }

  static std::optional<DurationUnit> unit_from_word(const std::string& w) {
    if (w == "day" || w == "days") return DurationUnit::days;
    if (w == "week" || w == "weeks") return DurationUnit::weeks;
    if (w == "month" || w == "months") return DurationUnit::months;
    if (w == "year" || w == "years") return DurationUnit::years;
    return std::nullopt;
  }

  ExprPtr parse_ident_or_call() {
    const auto& t = peek();
    advance();
    if (!at(lex::Tok::lparen)) {
      if (auto wd = weekday_from_code(t.text)) {
        return make(Expr{WeekdayLit{*wd}, t.line, t.column});
      }
      return make(Expr{NameRef{t.text}, t.line, t.column});
    }
    const auto& open = peek();
    const int open_line = open.line, open_col = open.column;
    advance();  // consume '('
    std::vector<ExprPtr> args;
    if (!at(lex::Tok::rparen)) {
      args.push_back(parse_expr());
      while (at(lex::Tok::comma)) {
        advance();
        args.push_back(parse_expr());
      }
    }
    if (!at(lex::Tok::rparen)) {
      // anchor the report on the unclosed '(' rather than wherever the
      // continuation scan ended up
      fail(TelErrorKind::parse, open_line, open_col,
           "mismatched bracket: '(' in the call to '" + t.text +
               "' is never closed (found " + describe(peek()) + ")");
    }
    advance();
    if (t.text == "date") return fold_date_literal(t, args);
    return make(Expr{Call{t.text, std::move(args)}, t.line, t.column});
  }

  // date(y, m, d) is a literal: all three arguments must be integer tokens.
  ExprPtr fold_date_literal(const lex::Token& t, const std::vector<ExprPtr>& args) {
    if (args.size() != 3) {
      fail(TelErrorKind::parse, t.line, t.column,
           "date(...) takes exactly three integers, got " +
               std::to_string(args.size()) + " argument(s)");
    }
    int parts[3];
    for (int i = 0; i < 3; ++i) {
      const auto* lit = std::get_if<IntLit>(&args[static_cast<size_t>(i)]->node);
      if (lit == nullptr) {
        fail(TelErrorKind::parse, t.line, t.column,
             "date(...) arguments must be integer literals");
      }
      parts[i] = static_cast<int>(lit->value);
    }
    return make(Expr{DateLit{parts[0], parts[1], parts[2]}, t.line, t.column});
  }

  std::string_view src_;
  std::vector<lex::Token> toks_;
  size_t pos_ = 0;
};

}  // namespace detail

inline Program parse_program(std::string_view source) {
  return detail::Parser(source, lex::tokenize(source)).parse();
}

}  // namespace tempora::tel

#endif  // TEMPORA_TEL_PARSER_HPP
