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

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "common/error.hpp"
#include "common/text.hpp"
#include "udf/expr.hpp"

namespace lakeq::udf {

std::string to_string(ExprType t) {
  const char* base = "NULL";
  switch (t.base) {
    case BaseType::kNumber: base = "NUMBER"; break;
    case BaseType::kText: base = "TEXT"; break;
    case BaseType::kBoolean: base = "BOOLEAN"; break;
    case BaseType::kNull: return "NULL";
  }
  return t.nullable ? std::string("NULLABLE<") + base + ">" : base;
}

ColumnType result_column_type(ExprType t) {
  switch (t.base) {
    case BaseType::kNumber: return ColumnType::kNumber;
    case BaseType::kBoolean: return ColumnType::kBoolean;
    default: return ColumnType::kText;
  }
}

namespace {

constexpr ExprType kNumber{BaseType::kNumber, false};
constexpr ExprType kText{BaseType::kText, false};
constexpr ExprType kBool{BaseType::kBoolean, false};

[[noreturn]] void type_error(const Expr& e, const std::string& msg) {
  fail(ErrorKind::kType,
       "type error at position " + std::to_string(e.pos) + ": " + msg);
}

ExprType column_expr_type(ColumnType t) {
  // Catalog columns may always contain empty cells.
  switch (t) {
    case ColumnType::kNumber: return {BaseType::kNumber, true};
    case ColumnType::kBoolean: return {BaseType::kBoolean, true};
    default: return {BaseType::kText, true};
  }
}

// NULL unifies with anything.
std::optional<ExprType> unify(ExprType a, ExprType b) {
  if (a.base == BaseType::kNull) return ExprType{b.base, true};
  if (b.base == BaseType::kNull) return ExprType{a.base, true};
  if (a.base != b.base) return std::nullopt;
  return ExprType{a.base, a.nullable || b.nullable};
}

bool accepts(ExprType actual, BaseType wanted) {
  return actual.base == wanted || actual.base == BaseType::kNull;
}

struct Builtin {
  std::string_view name;
  std::size_t min_args;
  std::size_t max_args;  // SIZE_MAX = variadic
  std::string_view signature;
};

constexpr Builtin kBuiltins[] = {
    {"if", 3, 3, "if(cond: BOOLEAN, then, else) -> type of then/else"},
    {"substr", 3, 3, "substr(s: TEXT, start: NUMBER, len: NUMBER) -> TEXT  (0-based start)"},
    {"split", 3, 3, "split(s: TEXT, sep: TEXT, i: NUMBER) -> TEXT  (i-th piece, 0-based; NULL if absent)"},
    {"concat", 1, std::numeric_limits<std::size_t>::max(), "concat(a, b, ...) -> TEXT"},
    {"parse_int", 1, 1, "parse_int(s: TEXT) -> NUMBER  (NULL unless s is an integer)"},
    {"parse_float", 1, 1, "parse_float(s: TEXT) -> NUMBER  (NULL unless s is a number)"},
    {"lower", 1, 1, "lower(s: TEXT) -> TEXT"},
    {"upper", 1, 1, "upper(s: TEXT) -> TEXT"},
    {"trim", 1, 1, "trim(s: TEXT) -> TEXT"},
    {"len", 1, 1, "len(s: TEXT) -> NUMBER"},
    {"abs", 1, 1, "abs(n: NUMBER) -> NUMBER"},
    {"floor", 1, 1, "floor(n: NUMBER) -> NUMBER"},
    {"round", 1, 2, "round(n: NUMBER [, digits: NUMBER]) -> NUMBER  (half away from zero)"},
};

const Builtin* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

ExprType check(const Expr& e, const std::vector<Column>& schema) {
  switch (e.kind) {
    case NodeKind::kLiteral:
      if (std::holds_alternative<std::monostate>(e.literal)) return {BaseType::kNull, true};
      if (std::holds_alternative<double>(e.literal)) return kNumber;
      if (std::holds_alternative<bool>(e.literal)) return kBool;
      return kText;
    case NodeKind::kColumn: {
      for (const auto& c : schema) {
        if (c.name == e.name) return column_expr_type(c.type);
      }
      std::vector<std::string> names;
      for (const auto& c : schema) names.push_back(c.name);
      fail(ErrorKind::kBinding, "unknown column '" + e.name +
                                    "' (available: " + join(names, ", ") + ")");
    }
    case NodeKind::kUnary: {
      auto t = check(*e.args[0], schema);
      if (e.op == Op::kNot) {
        if (!accepts(t, BaseType::kBoolean)) type_error(e, "'not' expects BOOLEAN, got " + to_string(t));
        return {BaseType::kBoolean, t.nullable};
      }
      if (!accepts(t, BaseType::kNumber)) type_error(e, "unary '-' expects NUMBER, got " + to_string(t));
      return {BaseType::kNumber, t.nullable};
    }
    case NodeKind::kBinary: {
      auto l = check(*e.args[0], schema);
      auto r = check(*e.args[1], schema);
      bool nullable = l.nullable || r.nullable;
      switch (e.op) {
        case Op::kAdd: case Op::kSub: case Op::kMul:
          if (!accepts(l, BaseType::kNumber) || !accepts(r, BaseType::kNumber)) {
            type_error(e, std::string("'") + op_symbol(e.op) + "' expects NUMBER operands, got " +
                              to_string(l) + " and " + to_string(r));
          }
          return {BaseType::kNumber, nullable};
        case Op::kDiv: case Op::kMod:
          if (!accepts(l, BaseType::kNumber) || !accepts(r, BaseType::kNumber)) {
            type_error(e, std::string("'") + op_symbol(e.op) + "' expects NUMBER operands, got " +
                              to_string(l) + " and " + to_string(r));
          }
          return {BaseType::kNumber, true};  // division by zero yields NULL
        case Op::kEq: case Op::kNe: case Op::kLt: case Op::kLe: case Op::kGt: case Op::kGe: {
          auto u = unify(l, r);
          if (!u) {
            type_error(e, "cannot compare " + to_string(l) + " with " + to_string(r));
          }
          if (u->base == BaseType::kBoolean && e.op != Op::kEq && e.op != Op::kNe) {
            type_error(e, "BOOLEAN values only support = and !=");
          }
          return {BaseType::kBoolean, nullable};
        }
        case Op::kAnd: case Op::kOr:
          if (!accepts(l, BaseType::kBoolean) || !accepts(r, BaseType::kBoolean)) {
            type_error(e, std::string("'") + op_symbol(e.op) + "' expects BOOLEAN operands");
          }
          return {BaseType::kBoolean, nullable};
        default:
          break;
      }
      type_error(e, "bad binary operator");
    }
    case NodeKind::kCall: {
      const Builtin* b = find_builtin(e.name);
      if (!b) type_error(e, "unknown function '" + e.name + "'");
      if (e.args.size() < b->min_args || e.args.size() > b->max_args) {
        type_error(e, "wrong number of arguments to " + e.name + ": " +
                          std::string(b->signature));
      }
      std::vector<ExprType> ts;
      bool any_nullable = false;
      for (const auto& a : e.args) {
        ts.push_back(check(*a, schema));
        any_nullable = any_nullable || ts.back().nullable;
      }
      auto want = [&](std::size_t i, BaseType base) {
        if (!accepts(ts[i], base)) {
          type_error(e, e.name + " argument " + std::to_string(i + 1) + " must be " +
                            to_string(ExprType{base, false}) + ", got " + to_string(ts[i]) +
                            "; signature: " + std::string(b->signature));
        }
      };
      const auto& n = e.name;
      if (n == "if") {
        want(0, BaseType::kBoolean);
        auto u = unify(ts[1], ts[2]);
        if (!u) type_error(e, "if branches differ: " + to_string(ts[1]) + " vs " + to_string(ts[2]));
        return *u;
      }
      if (n == "substr") {
        want(0, BaseType::kText); want(1, BaseType::kNumber); want(2, BaseType::kNumber);
        return {BaseType::kText, any_nullable};
      }
      if (n == "split") {
        want(0, BaseType::kText); want(1, BaseType::kText); want(2, BaseType::kNumber);
        return {BaseType::kText, true};
      }
      if (n == "concat") return {BaseType::kText, any_nullable};
      if (n == "parse_int" || n == "parse_float") {
        if (!accepts(ts[0], BaseType::kText) && !accepts(ts[0], BaseType::kNumber)) {
          want(0, BaseType::kText);
        }
        return {BaseType::kNumber, true};
      }
      if (n == "lower" || n == "upper" || n == "trim") {
        want(0, BaseType::kText);
        return {BaseType::kText, any_nullable};
      }
      if (n == "len") {
        want(0, BaseType::kText);
        return {BaseType::kNumber, any_nullable};
      }
      // abs, floor, round
      for (std::size_t i = 0; i < ts.size(); ++i) want(i, BaseType::kNumber);
      return {BaseType::kNumber, any_nullable};
    }
  }
  type_error(e, "unknown node");
}

// ---- evaluation -----------------------------------------------------------

bool integral(double d) { return std::isfinite(d) && d == std::trunc(d); }

Cell number_or_null(double d) {
  if (!std::isfinite(d)) return std::monostate{};
  return d;
}

std::optional<double> parse_integer_text(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') i = 1;
  if (i == s.size()) return std::nullopt;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') return std::nullopt;
  }
  double v = 0;
  for (std::size_t j = i; j < s.size(); ++j) v = v * 10 + (s[j] - '0');
  return s[0] == '-' ? -v : v;
}

std::optional<double> parse_float_text(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s[0] == '+') s.remove_prefix(1);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string as_text(const Cell& c) { return render_cell(c); }

// Three-valued boolean: nullopt = NULL.
std::optional<bool> as_bool(const Cell& c) {
  if (auto* b = std::get_if<bool>(&c)) return *b;
  return std::nullopt;
}

// Typed views of a cell; a mismatch reads as NULL so evaluation stays total.
const double* num(const Cell& c) { return std::get_if<double>(&c); }

bool fits(const Cell& c, ColumnType t) {
  switch (t) {
    case ColumnType::kNumber: return std::holds_alternative<double>(c);
    case ColumnType::kBoolean: return std::holds_alternative<bool>(c);
    case ColumnType::kText: return std::holds_alternative<std::string>(c);
    default: return true;
  }
}

Cell eval(const Expr& e, const std::vector<Column>& schema, const Row& row);

Cell eval_call(const Expr& e, const std::vector<Column>& schema, const Row& row) {
  const auto& n = e.name;
  if (n == "if") {
    auto cond = as_bool(eval(*e.args[0], schema, row));
    return (cond && *cond) ? eval(*e.args[1], schema, row) : eval(*e.args[2], schema, row);
  }
  std::vector<Cell> vals;
  vals.reserve(e.args.size());
  for (const auto& a : e.args) {
    vals.push_back(eval(*a, schema, row));
    if (is_null(vals.back())) return std::monostate{};
  }
  if (n == "substr") {
    std::string s = as_text(vals[0]);
    if (!num(vals[1]) || !num(vals[2])) return std::monostate{};
    double start = std::floor(*num(vals[1]));
    double len = std::floor(*num(vals[2]));
    if (start < 0) start = 0;
    if (len <= 0 || start >= static_cast<double>(s.size())) return std::string{};
    auto st = static_cast<std::size_t>(start);
    auto ln = static_cast<std::size_t>(std::min(len, static_cast<double>(s.size())));
    return s.substr(st, ln);
  }
  if (n == "split") {
    std::string s = as_text(vals[0]);
    std::string sep = as_text(vals[1]);
    if (!num(vals[2])) return std::monostate{};
    double idx = *num(vals[2]);
    if (sep.empty() || !integral(idx) || idx < 0) return std::monostate{};
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      auto at = s.find(sep, pos);
      if (at == std::string::npos) {
        parts.push_back(s.substr(pos));
        break;
      }
      parts.push_back(s.substr(pos, at - pos));
      pos = at + sep.size();
    }
    auto i = static_cast<std::size_t>(idx);
    if (i >= parts.size()) return std::monostate{};
    return parts[i];
  }
  if (n == "concat") {
    std::string out;
    for (const auto& v : vals) out += as_text(v);
    return out;
  }
  if (n == "parse_int") {
    if (auto* d = std::get_if<double>(&vals[0])) return std::trunc(*d);
    auto v = parse_integer_text(as_text(vals[0]));
    return v ? number_or_null(*v) : Cell(std::monostate{});
  }
  if (n == "parse_float") {
    if (auto* d = std::get_if<double>(&vals[0])) return *d;
    auto v = parse_float_text(as_text(vals[0]));
    return v ? Cell(*v) : Cell(std::monostate{});
  }
  if (n == "lower") return to_lower(as_text(vals[0]));
  if (n == "upper") return to_upper(as_text(vals[0]));
  if (n == "trim") return std::string(trim(as_text(vals[0])));
  if (n == "len") return static_cast<double>(as_text(vals[0]).size());
  if (!num(vals[0])) return std::monostate{};
  double x = *num(vals[0]);
  if (n == "abs") return std::abs(x);
  if (n == "floor") return std::floor(x);
  if (n == "round") {
    if (vals.size() > 1 && !num(vals[1])) return std::monostate{};
    double digits = vals.size() > 1 ? std::floor(*num(vals[1])) : 0;
    if (digits < -15 || digits > 15) return std::monostate{};
    double scale = std::pow(10.0, digits);
    return number_or_null(std::round(x * scale) / scale);
  }
  return std::monostate{};
}

Cell eval(const Expr& e, const std::vector<Column>& schema, const Row& row) {
  switch (e.kind) {
    case NodeKind::kLiteral:
      return std::visit([](const auto& v) -> Cell { return v; }, e.literal);
    case NodeKind::kColumn: {
      for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].name != e.name) continue;
        if (i >= row.size()) return std::monostate{};
        const Cell& c = row[i];
        if (std::holds_alternative<ImageRef>(c) || std::holds_alternative<TextRef>(c)) {
          return render_cell(c);
        }
        return fits(c, schema[i].type) ? c : Cell(std::monostate{});
      }
      return std::monostate{};
    }
    case NodeKind::kUnary: {
      Cell v = eval(*e.args[0], schema, row);
      if (is_null(v)) return std::monostate{};
      if (e.op == Op::kNot) {
        auto b = as_bool(v);
        return b ? Cell(!*b) : Cell(std::monostate{});
      }
      return num(v) ? number_or_null(-*num(v)) : Cell(std::monostate{});
    }
    case NodeKind::kBinary: {
      if (e.op == Op::kAnd || e.op == Op::kOr) {
        auto l = as_bool(eval(*e.args[0], schema, row));
        auto r = as_bool(eval(*e.args[1], schema, row));
        if (e.op == Op::kAnd) {
          if ((l && !*l) || (r && !*r)) return false;
          if (l && r) return true;
          return std::monostate{};
        }
        if ((l && *l) || (r && *r)) return true;
        if (l && r) return false;
        return std::monostate{};
      }
      Cell l = eval(*e.args[0], schema, row);
      Cell r = eval(*e.args[1], schema, row);
      if (is_null(l) || is_null(r)) return std::monostate{};
      bool arith = e.op == Op::kAdd || e.op == Op::kSub || e.op == Op::kMul || e.op == Op::kDiv || e.op == Op::kMod;
      if (arith && (!num(l) || !num(r))) return std::monostate{};
      switch (e.op) {
        case Op::kAdd: return number_or_null(*num(l) + *num(r));
        case Op::kSub: return number_or_null(*num(l) - *num(r));
        case Op::kMul: return number_or_null(*num(l) * *num(r));
        case Op::kDiv: {
          double a = *num(l), b = *num(r);
          if (b == 0) return std::monostate{};
          if (integral(a) && integral(b)) return number_or_null(std::floor(a / b));
          return number_or_null(a / b);
        }
        case Op::kMod: {
          double a = *num(l), b = *num(r);
          if (b == 0) return std::monostate{};
          return number_or_null(a - b * std::floor(a / b));
        }
        default: {
          auto ord = compare_cells(l, r);
          switch (e.op) {
            case Op::kEq: return ord == 0;
            case Op::kNe: return ord != 0;
            case Op::kLt: return ord < 0;
            case Op::kLe: return ord <= 0;
            case Op::kGt: return ord > 0;
            case Op::kGe: return ord >= 0;
            default: return std::monostate{};
          }
        }
      }
    }
    case NodeKind::kCall:
      return eval_call(e, schema, row);
  }
  return std::monostate{};
}

}  // namespace

ExprType typecheck(const Expr& e, const std::vector<Column>& schema) {
  return check(e, schema);
}

Cell evaluate(const Expr& e, const std::vector<Column>& schema, const Row& row) {
  return eval(e, schema, row);
}

std::vector<std::string> builtin_signatures() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.signature);
  return out;
}

}  // namespace lakeq::udf
