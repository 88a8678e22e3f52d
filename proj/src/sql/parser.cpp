// Copyright 2026 the lakeq authors
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

#include <cctype>
#include <charconv>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "sql/sql.hpp"

namespace lakeq::sql {

namespace {

// Skips whitespace and comments starting at i.
std::size_t skip_trivia(std::string_view s, std::size_t i) {
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s.substr(i, 2) == "--") {
      auto nl = s.find('\n', i);
      i = nl == std::string_view::npos ? s.size() : nl + 1;
    } else if (s.substr(i, 2) == "/*") {
      auto end = s.find("*/", i + 2);
      i = end == std::string_view::npos ? s.size() : end + 2;
    } else {
      break;
    }
  }
  return i;
}

}  // namespace

void ensure_select_only(std::string_view sql) {
  std::size_t i = skip_trivia(sql, 0);
  // An opening parenthesis does not hide the first keyword.
  while (i < sql.size() && sql[i] == '(') i = skip_trivia(sql, i + 1);
  std::size_t j = i;
  while (j < sql.size() && std::isalpha(static_cast<unsigned char>(sql[j]))) ++j;
  std::string keyword = to_upper(sql.substr(i, j - i));
  if (keyword != "SELECT") {
    fail(ErrorKind::kSecurity,
         "only SELECT statements are allowed; rejected statement starting with '" +
             (keyword.empty() ? std::string(sql.substr(i, 12)) : keyword) + "'");
  }
  // No second statement after a semicolon.
  char quote = 0;
  for (std::size_t k = j; k < sql.size(); ++k) {
    char c = sql[k];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`') {
      quote = c;
    } else if (c == '-' && sql.substr(k, 2) == "--") {
      auto nl = sql.find('\n', k);
      k = nl == std::string_view::npos ? sql.size() : nl;
    } else if (c == '/' && sql.substr(k, 2) == "/*") {
      auto end = sql.find("*/", k + 2);
      k = end == std::string_view::npos ? sql.size() : end + 1;
    } else if (c == ';') {
      if (skip_trivia(sql, k + 1) != sql.size()) {
        fail(ErrorKind::kSecurity,
             "multiple statements are not allowed; only a single SELECT may run");
      }
    }
  }
}

namespace {

enum class Tok { kIdent, kQuotedIdent, kString, kNumber, kPunct, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  double number = 0;
};

const std::set<std::string>& reserved() {
  static const std::set<std::string> kWords = {
      "SELECT", "FROM", "WHERE", "GROUP", "BY", "HAVING", "ORDER", "LIMIT",
      "OFFSET", "JOIN", "INNER", "CROSS", "LEFT", "RIGHT", "FULL", "OUTER",
      "ON", "AS", "AND", "OR", "NOT", "ASC", "DESC", "DISTINCT", "UNION",
      "IN", "LIKE", "IS", "NULL", "BETWEEN", "CASE", "WHEN", "THEN", "ELSE",
      "END", "CAST", "TRUE", "FALSE", "ALL", "NATURAL", "USING"};
  return kWords;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto error = [&](std::size_t at, const std::string& msg) {
    fail(ErrorKind::kParse, "SQL syntax error at position " + std::to_string(at) + ": " + msg);
  };
  while (true) {
    i = skip_trivia(src, i);
    if (i >= src.size()) break;
    std::size_t start = i;
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isdigit(c) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      Token t{Tok::kNumber, std::string(src.substr(start, i - start)), start, i};
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
        error(start, "malformed number '" + t.text + "'");
      }
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\'') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < src.size()) {
        if (src[i] == '\'') {
          if (i + 1 < src.size() && src[i + 1] == '\'') {
            value.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        value.push_back(src[i++]);
      }
      if (!closed) error(start, "unterminated string literal");
      out.push_back({Tok::kString, std::move(value), start, i});
      continue;
    }
    if (c == '"' || c == '`' || c == '[') {
      char close = c == '[' ? ']' : static_cast<char>(c);
      auto end = src.find(close, i + 1);
      if (end == std::string_view::npos) error(start, "unterminated quoted identifier");
      out.push_back({Tok::kQuotedIdent, std::string(src.substr(i + 1, end - i - 1)), start, end + 1});
      i = end + 1;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({Tok::kIdent, std::string(src.substr(start, i - start)), start, i});
      continue;
    }
    static const std::string_view kTwo[] = {"<=", ">=", "<>", "!=", "==", "||"};
    bool matched = false;
    for (auto op : kTwo) {
      if (src.substr(i, 2) == op) {
        std::string norm(op);
        if (norm == "<>") norm = "!=";
        if (norm == "==") norm = "=";
        out.push_back({Tok::kPunct, norm, start, i + 2});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(),.*+-/%=<>;").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::kPunct, std::string(1, static_cast<char>(c)), start, i + 1});
      ++i;
      continue;
    }
    error(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Tok::kEnd, "", src.size(), src.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

  SelectStmt parse_statement() {
    SelectStmt s;
    expect_keyword("SELECT");
    if (accept_keyword("DISTINCT")) {
      s.distinct = true;
    } else {
      accept_keyword("ALL");
    }
    s.items.push_back(parse_item());
    while (accept_punct(",")) s.items.push_back(parse_item());
    expect_keyword("FROM");
    s.from = parse_table_ref();
    while (true) {
      if (accept_punct(",")) {
        s.joins.push_back({parse_table_ref(), nullptr});
      } else if (keyword("CROSS")) {
        next();
        expect_keyword("JOIN");
        s.joins.push_back({parse_table_ref(), nullptr});
      } else if (keyword("JOIN") || keyword("INNER")) {
        if (accept_keyword("INNER")) {
          expect_keyword("JOIN");
        } else {
          next();
        }
        Join j{parse_table_ref(), nullptr};
        expect_keyword("ON");
        j.on = parse_expr();
        s.joins.push_back(std::move(j));
      } else if (keyword("LEFT") || keyword("RIGHT") || keyword("FULL") || keyword("NATURAL")) {
        error_here("only inner equi-joins and cross joins are supported");
      } else {
        break;
      }
    }
    if (accept_keyword("WHERE")) s.where = parse_expr();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      s.group_by.push_back(parse_expr());
      while (accept_punct(",")) s.group_by.push_back(parse_expr());
    }
    if (accept_keyword("HAVING")) s.having = parse_expr();
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderItem o{parse_expr(), false};
        if (accept_keyword("DESC")) {
          o.descending = true;
        } else {
          accept_keyword("ASC");
        }
        s.order_by.push_back(std::move(o));
      } while (accept_punct(","));
    }
    if (accept_keyword("LIMIT")) {
      s.limit = parse_count("LIMIT");
      if (accept_keyword("OFFSET")) {
        s.offset = parse_count("OFFSET");
      } else if (accept_punct(",")) {
        // LIMIT offset, count
        s.offset = s.limit;
        s.limit = parse_count("LIMIT");
      }
    }
    accept_punct(";");
    if (peek().kind != Tok::kEnd) {
      if (keyword("UNION") || keyword("INTERSECT") || keyword("EXCEPT")) {
        error_here("compound SELECT statements are not supported");
      }
      error_here("unexpected '" + peek().text + "'");
    }
    return s;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  std::size_t prev_end() const { return i_ == 0 ? 0 : toks_[i_ - 1].end; }

  bool keyword(std::string_view kw, std::size_t k = 0) const {
    const auto& t = peek(k);
    return t.kind == Tok::kIdent && to_upper(t.text) == kw;
  }
  bool accept_keyword(std::string_view kw) {
    if (!keyword(kw)) return false;
    next();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) error_here("expected " + std::string(kw));
  }
  bool punct(std::string_view p) const {
    return peek().kind == Tok::kPunct && peek().text == p;
  }
  bool accept_punct(std::string_view p) {
    if (!punct(p)) return false;
    next();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) error_here("expected '" + std::string(p) + "'");
  }

  [[noreturn]] void error_here(const std::string& msg) const {
    const auto& t = peek();
    std::string where = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    fail(ErrorKind::kParse, "SQL syntax error at position " + std::to_string(t.begin) +
                                " near " + where + ": " + msg);
  }

  long long parse_count(const char* clause) {
    const auto& t = peek();
    if (t.kind != Tok::kNumber || t.number < 0 || t.number != static_cast<long long>(t.number)) {
      error_here(std::string(clause) + " expects a non-negative integer");
    }
    next();
    return static_cast<long long>(t.number);
  }

  bool is_identifier_token(const Token& t) const {
    if (t.kind == Tok::kQuotedIdent) return true;
    return t.kind == Tok::kIdent && !reserved().count(to_upper(t.text));
  }

  std::string parse_identifier(const char* what) {
    if (!is_identifier_token(peek())) error_here(std::string("expected ") + what);
    return next().text;
  }

  TableRef parse_table_ref() {
    TableRef t;
    t.name = parse_identifier("table name");
    if (accept_keyword("AS")) {
      t.alias = parse_identifier("alias");
    } else if (is_identifier_token(peek())) {
      t.alias = next().text;
    }
    return t;
  }

  SelectItem parse_item() {
    SelectItem item;
    if (punct("*")) {
      next();
      item.star = true;
      return item;
    }
    if (is_identifier_token(peek()) && peek(1).kind == Tok::kPunct && peek(1).text == "." &&
        peek(2).kind == Tok::kPunct && peek(2).text == "*") {
      item.star = true;
      item.star_qualifier = next().text;
      next();
      next();
      return item;
    }
    item.expr = parse_expr();
    if (accept_keyword("AS")) {
      if (peek().kind == Tok::kString) {
        item.alias = next().text;
      } else {
        item.alias = parse_identifier("alias");
      }
    } else if (is_identifier_token(peek())) {
      item.alias = next().text;
    }
    return item;
  }

  ExprPtr finish(Expr e, std::size_t begin) {
    e.text = std::string(trim(src_.substr(begin, prev_end() - begin)));
    return std::make_shared<const Expr>(std::move(e));
  }

  ExprPtr binary(std::string op, ExprPtr l, ExprPtr r, std::size_t begin) {
    Expr e;
    e.kind = ExprKind::kBinary;
    e.name = std::move(op);
    e.args = {std::move(l), std::move(r)};
    return finish(std::move(e), begin);
  }

 public:
  ExprPtr parse_expr() { return parse_or(); }

 private:
  ExprPtr parse_or() {
    auto begin = peek().begin;
    auto lhs = parse_and();
    while (accept_keyword("OR")) lhs = binary("OR", lhs, parse_and(), begin);
    return lhs;
  }

  ExprPtr parse_and() {
    auto begin = peek().begin;
    auto lhs = parse_not();
    while (accept_keyword("AND")) lhs = binary("AND", lhs, parse_not(), begin);
    return lhs;
  }

  ExprPtr parse_not() {
    auto begin = peek().begin;
    if (accept_keyword("NOT")) {
      Expr e;
      e.kind = ExprKind::kUnary;
      e.name = "NOT";
      e.args = {parse_not()};
      return finish(std::move(e), begin);
    }
    return parse_predicate();
  }

  ExprPtr parse_predicate() {
    auto begin = peek().begin;
    auto lhs = parse_additive();
    static const char* kCmp[] = {"=", "!=", "<", "<=", ">", ">="};
    for (const char* op : kCmp) {
      if (accept_punct(op)) return binary(op, lhs, parse_additive(), begin);
    }
    if (accept_keyword("IS")) {
      Expr e;
      e.kind = ExprKind::kIsNull;
      e.negated = accept_keyword("NOT");
      expect_keyword("NULL");
      e.args = {lhs};
      return finish(std::move(e), begin);
    }
    bool negated = false;
    if (keyword("NOT") && (keyword("LIKE", 1) || keyword("IN", 1) || keyword("BETWEEN", 1))) {
      next();
      negated = true;
    }
    if (accept_keyword("LIKE")) {
      Expr e;
      e.kind = ExprKind::kLike;
      e.negated = negated;
      e.args = {lhs, parse_additive()};
      return finish(std::move(e), begin);
    }
    if (accept_keyword("IN")) {
      Expr e;
      e.kind = ExprKind::kIn;
      e.negated = negated;
      e.args = {lhs};
      expect_punct("(");
      if (keyword("SELECT")) error_here("subqueries are not supported");
      e.args.push_back(parse_expr());
      while (accept_punct(",")) e.args.push_back(parse_expr());
      expect_punct(")");
      return finish(std::move(e), begin);
    }
    if (accept_keyword("BETWEEN")) {
      auto lo = parse_additive();
      expect_keyword("AND");
      auto hi = parse_additive();
      auto both = binary("AND", binary(">=", lhs, lo, begin), binary("<=", lhs, hi, begin), begin);
      if (!negated) return both;
      Expr e;
      e.kind = ExprKind::kUnary;
      e.name = "NOT";
      e.args = {both};
      return finish(std::move(e), begin);
    }
    if (negated) error_here("expected LIKE, IN or BETWEEN after NOT");
    return lhs;
  }

  ExprPtr parse_additive() {
    auto begin = peek().begin;
    auto lhs = parse_multiplicative();
    while (punct("+") || punct("-")) {
      std::string op = next().text;
      lhs = binary(op, lhs, parse_multiplicative(), begin);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    auto begin = peek().begin;
    auto lhs = parse_concat();
    while (punct("*") || punct("/") || punct("%")) {
      std::string op = next().text;
      lhs = binary(op, lhs, parse_concat(), begin);
    }
    return lhs;
  }

  ExprPtr parse_concat() {
    auto begin = peek().begin;
    auto lhs = parse_unary();
    while (accept_punct("||")) lhs = binary("||", lhs, parse_unary(), begin);
    return lhs;
  }

  ExprPtr parse_unary() {
    auto begin = peek().begin;
    if (punct("-") || punct("+")) {
      std::string op = next().text;
      auto operand = parse_unary();
      if (op == "+") return operand;
      if (operand->kind == ExprKind::kLiteral && std::holds_alternative<double>(operand->literal)) {
        Expr e;
        e.kind = ExprKind::kLiteral;
        e.literal = -std::get<double>(operand->literal);
        return finish(std::move(e), begin);
      }
      Expr e;
      e.kind = ExprKind::kUnary;
      e.name = "-";
      e.args = {operand};
      return finish(std::move(e), begin);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    auto begin = peek().begin;
    const Token& t = peek();
    Expr e;
    switch (t.kind) {
      case Tok::kNumber:
        next();
        e.kind = ExprKind::kLiteral;
        e.literal = t.number;
        return finish(std::move(e), begin);
      case Tok::kString:
        next();
        e.kind = ExprKind::kLiteral;
        e.literal = t.text;
        return finish(std::move(e), begin);
      case Tok::kPunct:
        if (t.text == "(") {
          next();
          if (keyword("SELECT")) error_here("subqueries are not supported");
          auto inner = parse_expr();
          expect_punct(")");
          return inner;
        }
        if (t.text == "*") error_here("'*' is only allowed as a select item or in COUNT(*)");
        break;
      case Tok::kEnd:
        break;
      case Tok::kQuotedIdent:
      case Tok::kIdent: {
        auto upper = to_upper(t.text);
        if (t.kind == Tok::kIdent) {
          if (upper == "NULL") {
            next();
            e.kind = ExprKind::kLiteral;
            return finish(std::move(e), begin);
          }
          if (upper == "TRUE" || upper == "FALSE") {
            next();
            e.kind = ExprKind::kLiteral;
            e.literal = upper == "TRUE";
            return finish(std::move(e), begin);
          }
          if (upper == "CASE") return parse_case(begin);
          if (upper == "CAST") {
            next();
            expect_punct("(");
            e.kind = ExprKind::kCast;
            e.args = {parse_expr()};
            expect_keyword("AS");
            if (peek().kind != Tok::kIdent) error_here("expected a type name");
            e.name = to_upper(next().text);
            expect_punct(")");
            return finish(std::move(e), begin);
          }
          if (reserved().count(upper)) break;
        }
        next();
        if (t.kind == Tok::kIdent && punct("(")) {
          next();
          e.kind = ExprKind::kFunction;
          e.name = upper;
          if (accept_punct("*")) {
            Expr star;
            star.kind = ExprKind::kStar;
            star.text = "*";
            e.args.push_back(std::make_shared<const Expr>(std::move(star)));
          } else if (!punct(")")) {
            e.distinct = accept_keyword("DISTINCT");
            e.args.push_back(parse_expr());
            while (accept_punct(",")) e.args.push_back(parse_expr());
          }
          expect_punct(")");
          return finish(std::move(e), begin);
        }
        e.kind = ExprKind::kColumn;
        if (accept_punct(".")) {
          e.qualifier = t.text;
          e.name = parse_identifier("column name");
        } else {
          e.name = t.text;
        }
        return finish(std::move(e), begin);
      }
    }
    error_here("expected an expression");
  }

  ExprPtr parse_case(std::size_t begin) {
    next();  // CASE
    Expr e;
    e.kind = ExprKind::kCase;
    ExprPtr operand;
    if (!keyword("WHEN")) operand = parse_expr();
    if (!keyword("WHEN")) error_here("expected WHEN");
    while (accept_keyword("WHEN")) {
      auto cond_begin = peek().begin;
      auto cond = parse_expr();
      if (operand) cond = binary("=", operand, cond, cond_begin);
      expect_keyword("THEN");
      e.args.push_back(cond);
      e.args.push_back(parse_expr());
    }
    if (accept_keyword("ELSE")) {
      e.args.push_back(parse_expr());
      e.has_else = true;
    }
    expect_keyword("END");
    return finish(std::move(e), begin);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

SelectStmt parse_select(std::string_view sql) {
  ensure_select_only(sql);
  Parser p(sql, lex(sql));
  return p.parse_statement();
}

std::vector<std::string> referenced_tables(const SelectStmt& stmt) {
  std::vector<std::string> out{stmt.from.name};
  for (const auto& j : stmt.joins) out.push_back(j.table.name);
  return out;
}

}  // namespace lakeq::sql
