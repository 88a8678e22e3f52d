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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "udf/expr.hpp"

namespace lakeq::udf {

const char* op_symbol(Op op) {
  switch (op) {
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kMod: return "%";
    case Op::kEq: return "=";
    case Op::kNe: return "!=";
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kNot: return "not";
    case Op::kNeg: return "-";
  }
  return "?";
}

ExprPtr Expr::make_literal(Literal v, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::kLiteral;
  e->literal = std::move(v);
  e->pos = pos;
  return e;
}

ExprPtr Expr::make_column(std::string name, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::kColumn;
  e->name = std::move(name);
  e->pos = pos;
  return e;
}

ExprPtr Expr::make_unary(Op op, ExprPtr operand, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::kUnary;
  e->op = op;
  e->args.push_back(std::move(operand));
  e->pos = pos;
  return e;
}

ExprPtr Expr::make_binary(Op op, ExprPtr lhs, ExprPtr rhs, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::kBinary;
  e->op = op;
  e->args.push_back(std::move(lhs));
  e->args.push_back(std::move(rhs));
  e->pos = pos;
  return e;
}

ExprPtr Expr::make_call(std::string fn, std::vector<ExprPtr> args,
                        std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = NodeKind::kCall;
  e->name = std::move(fn);
  e->args = std::move(args);
  e->pos = pos;
  return e;
}

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::kLiteral:
      return a.literal == b.literal;
    case NodeKind::kColumn:
      return a.name == b.name;
    case NodeKind::kUnary:
    case NodeKind::kBinary:
      if (a.op != b.op) return false;
      break;
    case NodeKind::kCall:
      if (a.name != b.name) return false;
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_structure(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

std::size_t depth(const Expr& e) {
  std::size_t d = 0;
  for (const auto& a : e.args) d = std::max(d, depth(*a));
  return d + 1;
}

namespace {

enum class Tok { kNumber, kString, kIdent, kPunct, kEnd };

struct Token {
  Tok kind;
  std::string text;
  double number = 0;
  std::size_t pos = 0;
};

bool is_keyword(std::string_view lowered) {
  return lowered == "and" || lowered == "or" || lowered == "not" ||
         lowered == "true" || lowered == "false" || lowered == "null";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto error = [&](std::size_t at, const std::string& msg) {
    fail(ErrorKind::kParse, "syntax error at position " + std::to_string(at) +
                                ": " + msg);
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(c) || (c == '.' && i + 1 < src.size() &&
                            std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      Token t{Tok::kNumber, std::string(src.substr(start, i - start)), 0, start};
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
        error(start, "malformed number '" + t.text + "'");
      }
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = static_cast<char>(c);
      ++i;
      std::string value;
      bool closed = false;
      while (i < src.size()) {
        char ch = src[i++];
        if (ch == quote) {
          closed = true;
          break;
        }
        if (ch == '\\' && i < src.size()) {
          char esc = src[i++];
          switch (esc) {
            case 'n': value.push_back('\n'); break;
            case 't': value.push_back('\t'); break;
            default: value.push_back(esc);
          }
          continue;
        }
        value.push_back(ch);
      }
      if (!closed) error(start, "unterminated string literal");
      out.push_back({Tok::kString, std::move(value), 0, start});
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({Tok::kIdent, std::string(src.substr(start, i - start)), 0, start});
      continue;
    }
    // Unicode comparison operators.
    static const std::pair<std::string_view, std::string_view> kUnicode[] = {
        {"≠", "!="}, {"≤", "<="}, {"≥", ">="}};
    bool matched = false;
    for (const auto& [u, ascii] : kUnicode) {
      if (src.substr(i, u.size()) == u) {
        out.push_back({Tok::kPunct, std::string(ascii), 0, start});
        i += u.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string_view kTwo[] = {"==", "!=", "<>", "<=", ">="};
    for (auto op : kTwo) {
      if (src.substr(i, 2) == op) {
        out.push_back({Tok::kPunct, std::string(op == "==" ? "=" : (op == "<>" ? "!=" : op)), 0, start});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("()+-*/%=<>,").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::kPunct, std::string(1, static_cast<char>(c)), 0, start});
      ++i;
      continue;
    }
    error(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Tok::kEnd, "", 0, src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ExprPtr parse() {
    auto e = parse_or();
    if (peek().kind != Tok::kEnd) {
      expected({"operator", "end of input"});
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  bool keyword(std::string_view kw) const {
    return peek().kind == Tok::kIdent && to_lower(peek().text) == kw;
  }
  bool punct(std::string_view p) const {
    return peek().kind == Tok::kPunct && peek().text == p;
  }

  [[noreturn]] void expected(const std::vector<std::string>& what) const {
    const auto& t = peek();
    std::string where = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    std::set<std::string> uniq(what.begin(), what.end());
    fail(ErrorKind::kParse,
         "syntax error at position " + std::to_string(t.pos) + " (" + where +
             "): expected one of " + join({uniq.begin(), uniq.end()}, ", "));
  }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (keyword("or")) {
      auto pos = next().pos;
      lhs = Expr::make_binary(Op::kOr, lhs, parse_and(), pos);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_not();
    while (keyword("and")) {
      auto pos = next().pos;
      lhs = Expr::make_binary(Op::kAnd, lhs, parse_not(), pos);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (keyword("not")) {
      auto pos = next().pos;
      return Expr::make_unary(Op::kNot, parse_not(), pos);
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    auto lhs = parse_add();
    static const std::pair<std::string_view, Op> kOps[] = {
        {"=", Op::kEq}, {"!=", Op::kNe}, {"<", Op::kLt},
        {"<=", Op::kLe}, {">", Op::kGt}, {">=", Op::kGe}};
    for (const auto& [sym, op] : kOps) {
      if (punct(sym)) {
        auto pos = next().pos;
        return Expr::make_binary(op, lhs, parse_add(), pos);
      }
    }
    return lhs;
  }

  ExprPtr parse_add() {
    auto lhs = parse_mul();
    while (punct("+") || punct("-")) {
      const auto& t = next();
      lhs = Expr::make_binary(t.text == "+" ? Op::kAdd : Op::kSub, lhs,
                              parse_mul(), t.pos);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    auto lhs = parse_unary();
    while (punct("*") || punct("/") || punct("%")) {
      const auto& t = next();
      Op op = t.text == "*" ? Op::kMul : (t.text == "/" ? Op::kDiv : Op::kMod);
      lhs = Expr::make_binary(op, lhs, parse_unary(), t.pos);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (punct("-")) {
      auto pos = next().pos;
      // A minus directly before a number is a negative literal.
      if (peek().kind == Tok::kNumber) {
        double v = next().number;
        return Expr::make_literal(-v, pos);
      }
      return Expr::make_unary(Op::kNeg, parse_unary(), pos);
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const auto& t = peek();
    switch (t.kind) {
      case Tok::kNumber:
        next();
        return Expr::make_literal(t.number, t.pos);
      case Tok::kString:
        next();
        return Expr::make_literal(t.text, t.pos);
      case Tok::kPunct:
        if (t.text == "(") {
          next();
          auto e = parse_or();
          if (!punct(")")) expected({")"});
          next();
          return e;
        }
        break;
      case Tok::kIdent: {
        auto lowered = to_lower(t.text);
        if (lowered == "true" || lowered == "false") {
          next();
          return Expr::make_literal(lowered == "true", t.pos);
        }
        if (lowered == "null") {
          next();
          return Expr::make_literal(std::monostate{}, t.pos);
        }
        if (is_keyword(lowered)) break;
        next();
        if (!punct("(")) return Expr::make_column(t.text, t.pos);
        next();
        if (lowered == "col") {
          const auto& arg = peek();
          if (arg.kind != Tok::kIdent && arg.kind != Tok::kString) {
            expected({"identifier", "string"});
          }
          next();
          if (!punct(")")) expected({")"});
          next();
          return Expr::make_column(arg.text, t.pos);
        }
        std::vector<ExprPtr> args;
        if (!punct(")")) {
          args.push_back(parse_or());
          while (punct(",")) {
            next();
            args.push_back(parse_or());
          }
        }
        if (!punct(")")) expected({",", ")"});
        next();
        return Expr::make_call(lowered, std::move(args), t.pos);
      }
      case Tok::kEnd:
        break;
    }
    expected({"number", "string", "identifier", "(", "-", "not", "true",
              "false", "null"});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool plain_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  auto lowered = to_lower(s);
  return !is_keyword(lowered) && lowered != "col";
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out + "\"";
}

}  // namespace

ExprPtr parse_expr(std::string_view source) {
  Parser p(lex(source));
  return p.parse();
}

std::string render(const Expr& e) {
  switch (e.kind) {
    case NodeKind::kLiteral: {
      if (std::holds_alternative<std::monostate>(e.literal)) return "null";
      if (auto* d = std::get_if<double>(&e.literal)) return format_number(*d);
      if (auto* b = std::get_if<bool>(&e.literal)) return *b ? "true" : "false";
      return quote_string(std::get<std::string>(e.literal));
    }
    case NodeKind::kColumn:
      return plain_identifier(e.name) ? e.name : "col(" + quote_string(e.name) + ")";
    case NodeKind::kUnary:
      if (e.op == Op::kNot) return "(not " + render(*e.args[0]) + ")";
      // Parenthesized so that a negated number stays a negation on reparse.
      if (e.args[0]->kind == NodeKind::kLiteral) return "(-(" + render(*e.args[0]) + "))";
      return "(-" + render(*e.args[0]) + ")";
    case NodeKind::kBinary:
      return "(" + render(*e.args[0]) + " " + op_symbol(e.op) + " " +
             render(*e.args[1]) + ")";
    case NodeKind::kCall: {
      std::vector<std::string> parts;
      for (const auto& a : e.args) parts.push_back(render(*a));
      return e.name + "(" + join(parts, ", ") + ")";
    }
  }
  return "";
}

}  // namespace lakeq::udf
