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
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "sql/sql.hpp"

namespace lakeq::sql {

namespace {

// Static type of an expression; nullopt is the type of a bare NULL.
using SqlType = std::optional<ColumnType>;

bool numeric(SqlType t) {
  return !t || *t == ColumnType::kNumber || *t == ColumnType::kBoolean;
}
bool textual(SqlType t) {
  return !t || *t == ColumnType::kText || *t == ColumnType::kImage ||
         *t == ColumnType::kDocument;
}
bool boolean(SqlType t) { return !t || *t == ColumnType::kBoolean; }

std::string type_name(SqlType t) { return t ? to_string(*t) : "NULL"; }

struct ScopeColumn {
  std::string label;  // alias or table name
  Column column;
};

enum class K {
  kLit, kCol, kOutRef, kNeg, kNot, kArith, kConcat, kCmp, kAnd, kOr,
  kFunc, kAgg, kCast, kCase, kIn, kLike, kIsNull,
};

struct BExpr {
  K k = K::kLit;
  Cell lit;
  std::size_t idx = 0;
  std::string op;
  std::vector<BExpr> a;
  SqlType type;
  bool negated = false;
  bool distinct = false;
  bool star = false;
  bool has_else = false;
};

bool contains_agg(const BExpr& e) {
  if (e.k == K::kAgg) return true;
  return std::any_of(e.a.begin(), e.a.end(), contains_agg);
}

bool is_aggregate_name(const std::string& n) {
  return n == "MIN" || n == "MAX" || n == "SUM" || n == "AVG" || n == "COUNT" ||
         n == "TOTAL";
}

struct OutputItem {
  std::string name;
  BExpr expr;
};

class Binder {
 public:
  Binder(const SelectStmt& stmt, const Environment& env) : stmt_(stmt), env_(env) {}

  struct Bound {
    std::vector<const Relation*> tables;
    std::vector<std::size_t> table_offsets;
    std::vector<std::optional<BExpr>> join_on;  // per join
    std::optional<BExpr> where;
    std::vector<BExpr> group_by;
    std::optional<BExpr> having;
    std::vector<OutputItem> items;
    std::vector<std::pair<BExpr, bool>> order_by;
    bool aggregate = false;
  };

  Bound bind() {
    Bound b;
    add_table(stmt_.from, b);
    for (const auto& j : stmt_.joins) {
      add_table(j.table, b);
      if (j.on) {
        auto on = bind_expr(*j.on, Ctx{});
        require_boolean(on, *j.on, "JOIN ... ON");
        b.join_on.push_back(std::move(on));
      } else {
        b.join_on.push_back(std::nullopt);
      }
    }
    if (stmt_.where) {
      auto w = bind_expr(*stmt_.where, Ctx{});
      require_boolean(w, *stmt_.where, "WHERE");
      b.where = std::move(w);
    }
    Ctx item_ctx{true};
    for (const auto& item : stmt_.items) {
      if (item.star) {
        bool any = false;
        for (std::size_t i = 0; i < scope_.size(); ++i) {
          if (!item.star_qualifier.empty() &&
              !same_name(scope_[i].label, item.star_qualifier)) {
            continue;
          }
          any = true;
          BExpr col;
          col.k = K::kCol;
          col.idx = i;
          col.type = scope_[i].column.type;
          b.items.push_back({scope_[i].column.name, std::move(col)});
        }
        if (!any) {
          fail(ErrorKind::kBinding, "unknown table '" + item.star_qualifier + "' in '" +
                                        item.star_qualifier + ".*'");
        }
        continue;
      }
      auto e = bind_expr(*item.expr, item_ctx);
      std::string name = item.alias;
      if (name.empty()) {
        name = item.expr->kind == ExprKind::kColumn ? item.expr->name : item.expr->text;
      }
      b.items.push_back({name, std::move(e)});
    }
    for (const auto& g : stmt_.group_by) {
      // GROUP BY may name a select alias or a 1-based position.
      if (g->kind == ExprKind::kLiteral && std::holds_alternative<double>(g->literal)) {
        double pos = std::get<double>(g->literal);
        if (pos < 1 || pos > static_cast<double>(b.items.size()) || pos != std::trunc(pos)) {
          fail(ErrorKind::kBinding, "GROUP BY position " + g->text + " is out of range");
        }
        b.group_by.push_back(b.items[static_cast<std::size_t>(pos) - 1].expr);
        continue;
      }
      if (g->kind == ExprKind::kColumn && g->qualifier.empty() && !has_source_column(g->name)) {
        auto it = std::find_if(b.items.begin(), b.items.end(),
                               [&](const OutputItem& o) { return o.name == g->name; });
        if (it != b.items.end()) {
          b.group_by.push_back(it->expr);
          continue;
        }
      }
      b.group_by.push_back(bind_expr(*g, Ctx{}));
    }
    if (b.items.empty()) fail(ErrorKind::kBinding, "empty select list");
    b.aggregate = !b.group_by.empty();
    for (const auto& it : b.items) b.aggregate = b.aggregate || contains_agg(it.expr);

    outputs_ = &b.items;
    if (stmt_.having) {
      auto h = bind_expr(*stmt_.having, Ctx{true, true});
      require_boolean(h, *stmt_.having, "HAVING");
      b.aggregate = true;
      b.having = std::move(h);
    }
    for (const auto& o : stmt_.order_by) {
      const Expr& ex = *o.expr;
      if (ex.kind == ExprKind::kLiteral && std::holds_alternative<double>(ex.literal)) {
        double pos = std::get<double>(ex.literal);
        if (pos < 1 || pos > static_cast<double>(b.items.size()) || pos != std::trunc(pos)) {
          fail(ErrorKind::kBinding, "ORDER BY position " + ex.text + " is out of range");
        }
        BExpr ref;
        ref.k = K::kOutRef;
        ref.idx = static_cast<std::size_t>(pos) - 1;
        ref.type = b.items[ref.idx].expr.type;
        b.order_by.emplace_back(std::move(ref), o.descending);
        continue;
      }
      auto e = bind_expr(ex, Ctx{true, true});
      if (contains_agg(e)) b.aggregate = true;
      b.order_by.emplace_back(std::move(e), o.descending);
    }
    if (b.aggregate) {
      for (const auto& g : b.group_by) {
        if (contains_agg(g)) fail(ErrorKind::kBinding, "aggregate functions are not allowed in GROUP BY");
      }
    }
    b.tables = tables_;
    b.table_offsets = offsets_;
    return b;
  }

 private:
  struct Ctx {
    bool allow_agg = false;
    bool allow_alias = false;
    bool in_agg = false;
  };

  static bool same_name(const std::string& a, const std::string& b) {
    return a == b || to_lower(a) == to_lower(b);
  }

  void add_table(const TableRef& ref, Bound&) {
    const Relation* rel = env_.find(ref.name);
    std::string resolved = ref.name;
    if (!rel) {
      for (const auto& n : env_.names()) {
        if (to_lower(n) == to_lower(ref.name)) {
          rel = env_.find(n);
          resolved = n;
          break;
        }
      }
    }
    if (!rel) {
      fail(ErrorKind::kBinding, "unknown relation '" + ref.name +
                                    "' (available: " + join(env_.names(), ", ") + ")");
    }
    std::string label = ref.alias.empty() ? resolved : ref.alias;
    for (const auto& l : labels_) {
      if (same_name(l, label)) {
        fail(ErrorKind::kBinding, "relation '" + label +
                                      "' appears twice in FROM; give each occurrence an alias");
      }
    }
    labels_.push_back(label);
    tables_.push_back(rel);
    offsets_.push_back(scope_.size());
    for (const auto& c : rel->schema()) scope_.push_back({label, c});
  }

  std::string scope_tables() const { return join(labels_, ", "); }

  bool has_source_column(const std::string& name) const {
    return std::any_of(scope_.begin(), scope_.end(), [&](const ScopeColumn& c) {
      return to_lower(c.column.name) == to_lower(name);
    });
  }

  std::size_t resolve_column(const Expr& e) const {
    std::vector<std::size_t> hits;
    bool qualifier_known = e.qualifier.empty();
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      if (!e.qualifier.empty()) {
        if (!same_name(scope_[i].label, e.qualifier)) continue;
        qualifier_known = true;
      }
      if (scope_[i].column.name == e.name) hits.push_back(i);
    }
    if (hits.empty()) {
      for (std::size_t i = 0; i < scope_.size(); ++i) {
        if (!e.qualifier.empty() && !same_name(scope_[i].label, e.qualifier)) continue;
        if (to_lower(scope_[i].column.name) == to_lower(e.name)) hits.push_back(i);
      }
    }
    if (!qualifier_known) {
      fail(ErrorKind::kBinding, "unknown relation '" + e.qualifier + "' in column reference '" +
                                    e.text + "' (in scope: " + scope_tables() + ")");
    }
    if (hits.empty()) {
      fail(ErrorKind::kBinding, "unknown column '" + e.name + "' in relation " +
                                    (e.qualifier.empty() ? scope_tables() : e.qualifier));
    }
    if (hits.size() > 1) {
      fail(ErrorKind::kBinding, "ambiguous column '" + e.name +
                                    "'; qualify it with one of: " + scope_tables());
    }
    return hits.front();
  }

  static void require_boolean(const BExpr& b, const Expr& src, const char* clause) {
    if (!boolean(b.type)) {
      fail(ErrorKind::kType, std::string("type error in predicate: ") + clause + " condition '" +
                                 src.text + "' has type " + type_name(b.type) +
                                 ", expected BOOLEAN");
    }
  }

  [[noreturn]] static void type_error(const Expr& e, const std::string& msg) {
    fail(ErrorKind::kType, "type error in '" + e.text + "': " + msg);
  }

  static void require_comparable(const Expr& e, SqlType l, SqlType r) {
    if ((numeric(l) && numeric(r)) || (textual(l) && textual(r))) return;
    type_error(e, "cannot compare " + type_name(l) + " with " + type_name(r) +
                      "; use CAST(... AS NUMBER) or CAST(... AS TEXT) to convert");
  }

  BExpr bind_expr(const Expr& e, Ctx ctx) {
    BExpr b;
    switch (e.kind) {
      case ExprKind::kLiteral:
        b.k = K::kLit;
        b.lit = e.literal;
        if (std::holds_alternative<double>(e.literal)) b.type = ColumnType::kNumber;
        if (std::holds_alternative<std::string>(e.literal)) b.type = ColumnType::kText;
        if (std::holds_alternative<bool>(e.literal)) b.type = ColumnType::kBoolean;
        return b;
      case ExprKind::kColumn: {
        if (ctx.allow_alias && outputs_ && e.qualifier.empty()) {
          // Output aliases win over source columns in HAVING / ORDER BY.
          for (std::size_t i = 0; i < outputs_->size(); ++i) {
            const auto& out = (*outputs_)[i];
            if (out.name == e.name && !(out.expr.k == K::kCol && scope_[out.expr.idx].column.name == e.name)) {
              if (ctx.in_agg) break;
              b.k = K::kOutRef;
              b.idx = i;
              b.type = out.expr.type;
              return b;
            }
          }
        }
        b.k = K::kCol;
        b.idx = resolve_column(e);
        b.type = scope_[b.idx].column.type;
        return b;
      }
      case ExprKind::kStar:
        type_error(e, "'*' is only valid inside COUNT(*)");
      case ExprKind::kUnary: {
        auto x = bind_expr(*e.args[0], ctx);
        if (e.name == "NOT") {
          if (!boolean(x.type)) type_error(e, "NOT expects BOOLEAN, got " + type_name(x.type));
          b.k = K::kNot;
          b.type = ColumnType::kBoolean;
        } else {
          if (!numeric(x.type)) type_error(e, "unary '-' expects NUMBER, got " + type_name(x.type));
          b.k = K::kNeg;
          b.type = ColumnType::kNumber;
        }
        b.a.push_back(std::move(x));
        return b;
      }
      case ExprKind::kBinary: {
        auto l = bind_expr(*e.args[0], ctx);
        auto r = bind_expr(*e.args[1], ctx);
        const auto& op = e.name;
        b.op = op;
        if (op == "AND" || op == "OR") {
          if (!boolean(l.type) || !boolean(r.type)) {
            type_error(e, op + " expects BOOLEAN operands, got " + type_name(l.type) + " and " +
                              type_name(r.type));
          }
          b.k = op == "AND" ? K::kAnd : K::kOr;
          b.type = ColumnType::kBoolean;
        } else if (op == "||") {
          b.k = K::kConcat;
          b.type = ColumnType::kText;
        } else if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
          if (!numeric(l.type) || !numeric(r.type)) {
            type_error(e, "'" + op + "' expects NUMBER operands, got " + type_name(l.type) +
                              " and " + type_name(r.type) +
                              "; use CAST(... AS NUMBER) to convert text");
          }
          b.k = K::kArith;
          b.type = ColumnType::kNumber;
        } else {
          require_comparable(e, l.type, r.type);
          b.k = K::kCmp;
          b.type = ColumnType::kBoolean;
        }
        b.a.push_back(std::move(l));
        b.a.push_back(std::move(r));
        return b;
      }
      case ExprKind::kIsNull:
        b.k = K::kIsNull;
        b.negated = e.negated;
        b.type = ColumnType::kBoolean;
        b.a.push_back(bind_expr(*e.args[0], ctx));
        return b;
      case ExprKind::kLike: {
        auto l = bind_expr(*e.args[0], ctx);
        auto r = bind_expr(*e.args[1], ctx);
        if (!textual(l.type) || !textual(r.type)) {
          type_error(e, "LIKE expects TEXT operands, got " + type_name(l.type) + " and " +
                            type_name(r.type));
        }
        b.k = K::kLike;
        b.negated = e.negated;
        b.type = ColumnType::kBoolean;
        b.a = {std::move(l), std::move(r)};
        return b;
      }
      case ExprKind::kIn: {
        b.k = K::kIn;
        b.negated = e.negated;
        b.type = ColumnType::kBoolean;
        for (const auto& a : e.args) b.a.push_back(bind_expr(*a, ctx));
        for (std::size_t i = 1; i < b.a.size(); ++i) require_comparable(e, b.a[0].type, b.a[i].type);
        return b;
      }
      case ExprKind::kCast: {
        auto x = bind_expr(*e.args[0], ctx);
        b.k = K::kCast;
        const auto& t = e.name;
        if (t == "INTEGER" || t == "INT" || t == "BIGINT") {
          b.op = "INTEGER";
          b.type = ColumnType::kNumber;
        } else if (t == "REAL" || t == "NUMBER" || t == "NUMERIC" || t == "FLOAT" ||
                   t == "DOUBLE" || t == "DECIMAL") {
          b.op = "REAL";
          b.type = ColumnType::kNumber;
        } else if (t == "TEXT" || t == "VARCHAR" || t == "STRING" || t == "CHAR") {
          b.op = "TEXT";
          b.type = ColumnType::kText;
        } else if (t == "BOOLEAN" || t == "BOOL") {
          if (!numeric(x.type)) type_error(e, "only numbers can be cast to BOOLEAN");
          b.op = "BOOLEAN";
          b.type = ColumnType::kBoolean;
        } else {
          type_error(e, "unsupported CAST target type " + t);
        }
        b.a.push_back(std::move(x));
        return b;
      }
      case ExprKind::kCase: {
        b.k = K::kCase;
        b.has_else = e.has_else;
        SqlType result;
        bool have = false;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          auto x = bind_expr(*e.args[i], ctx);
          bool is_cond = (i % 2 == 0) && !(e.has_else && i + 1 == e.args.size());
          if (is_cond) {
            if (!boolean(x.type)) type_error(e, "CASE WHEN condition must be BOOLEAN");
          } else if (x.type) {
            if (have && result && *result != *x.type &&
                !(numeric(result) && numeric(x.type))) {
              type_error(e, "CASE branches have different types " + type_name(result) + " and " +
                                type_name(x.type));
            }
            if (!result || (*x.type == ColumnType::kNumber)) result = x.type;
            have = true;
          }
          b.a.push_back(std::move(x));
        }
        b.type = result ? result : SqlType(ColumnType::kText);
        return b;
      }
      case ExprKind::kFunction: {
        const auto& n = e.name;
        if (is_aggregate_name(n)) {
          if (!ctx.allow_agg) {
            type_error(e, "aggregate " + n + "() is not allowed here (use it in the SELECT list or HAVING)");
          }
          if (ctx.in_agg) type_error(e, "nested aggregate functions are not allowed");
          if (e.args.size() != 1) type_error(e, n + "() takes exactly one argument");
          b.k = K::kAgg;
          b.op = n == "TOTAL" ? "SUM" : n;
          b.distinct = e.distinct;
          if (e.args[0]->kind == ExprKind::kStar) {
            if (n != "COUNT") type_error(e, "only COUNT accepts '*'");
            b.star = true;
            b.type = ColumnType::kNumber;
            return b;
          }
          Ctx inner = ctx;
          inner.in_agg = true;
          auto x = bind_expr(*e.args[0], inner);
          if ((b.op == "SUM" || b.op == "AVG") && !numeric(x.type)) {
            type_error(e, b.op + "() expects a NUMBER argument, got " + type_name(x.type) +
                              "; use CAST(... AS NUMBER)");
          }
          b.type = (b.op == "MIN" || b.op == "MAX") ? (x.type ? x.type : SqlType(ColumnType::kText))
                                                    : SqlType(ColumnType::kNumber);
          b.a.push_back(std::move(x));
          return b;
        }
        b.k = K::kFunc;
        b.op = n;
        for (const auto& a : e.args) b.a.push_back(bind_expr(*a, ctx));
        auto arity = [&](std::size_t lo, std::size_t hi) {
          if (b.a.size() < lo || b.a.size() > hi) type_error(e, "wrong number of arguments to " + n);
        };
        if (n == "LOWER" || n == "UPPER" || n == "TRIM") {
          arity(1, 1);
          if (!textual(b.a[0].type)) type_error(e, n + " expects TEXT");
          b.type = ColumnType::kText;
        } else if (n == "LENGTH") {
          arity(1, 1);
          if (!textual(b.a[0].type)) type_error(e, "LENGTH expects TEXT");
          b.type = ColumnType::kNumber;
        } else if (n == "ABS") {
          arity(1, 1);
          if (!numeric(b.a[0].type)) type_error(e, "ABS expects NUMBER");
          b.type = ColumnType::kNumber;
        } else if (n == "ROUND") {
          arity(1, 2);
          for (const auto& a : b.a) {
            if (!numeric(a.type)) type_error(e, "ROUND expects NUMBER arguments");
          }
          b.type = ColumnType::kNumber;
        } else if (n == "SUBSTR" || n == "SUBSTRING") {
          arity(2, 3);
          if (!textual(b.a[0].type)) type_error(e, n + " expects TEXT as first argument");
          for (std::size_t i = 1; i < b.a.size(); ++i) {
            if (!numeric(b.a[i].type)) type_error(e, n + " expects NUMBER positions");
          }
          b.op = "SUBSTR";
          b.type = ColumnType::kText;
        } else if (n == "COALESCE" || n == "IFNULL") {
          arity(n == "IFNULL" ? 2 : 1, n == "IFNULL" ? 2 : 64);
          SqlType t;
          for (const auto& a : b.a) {
            if (!a.type) continue;
            if (t && *t != *a.type && !(numeric(t) && numeric(a.type))) {
              type_error(e, n + " arguments have different types");
            }
            if (!t || *a.type == ColumnType::kNumber) t = a.type;
          }
          b.op = "COALESCE";
          b.type = t ? t : SqlType(ColumnType::kText);
        } else {
          fail(ErrorKind::kBinding, "unknown function '" + n + "'");
        }
        return b;
      }
    }
    type_error(e, "unsupported expression");
  }

  const SelectStmt& stmt_;
  const Environment& env_;
  std::vector<ScopeColumn> scope_;
  std::vector<std::string> labels_;
  std::vector<const Relation*> tables_;
  std::vector<std::size_t> offsets_;
  const std::vector<OutputItem>* outputs_ = nullptr;
};

// ---- evaluation -----------------------------------------------------------

std::optional<bool> truth(const Cell& c) {
  if (auto* b = std::get_if<bool>(&c)) return *b;
  if (auto* d = std::get_if<double>(&c)) return *d != 0;
  return std::nullopt;
}

double num(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return *d;
  if (auto* b = std::get_if<bool>(&c)) return *b ? 1 : 0;
  return 0;
}

bool integral(double d) { return std::isfinite(d) && d == std::trunc(d); }

Cell finite_or_null(double d) {
  if (!std::isfinite(d)) return std::monostate{};
  return d;
}

// Comparison within a type class; callers ensure neither side is NULL.
int sql_compare(const Cell& a, const Cell& b) {
  bool an = std::holds_alternative<double>(a) || std::holds_alternative<bool>(a);
  bool bn = std::holds_alternative<double>(b) || std::holds_alternative<bool>(b);
  if (an && bn) {
    double x = num(a), y = num(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (an != bn) return an ? -1 : 1;
  return render_cell(a).compare(render_cell(b)) < 0
             ? -1
             : (render_cell(a) == render_cell(b) ? 0 : 1);
}

bool like_match(std::string_view s, std::string_view p) {
  // Iterative wildcard match, ASCII case-insensitive.
  std::size_t si = 0, pi = 0, star = std::string_view::npos, mark = 0;
  auto eq = [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
  };
  while (si < s.size()) {
    if (pi < p.size() && (p[pi] == '_' || (p[pi] != '%' && eq(p[pi], s[si])))) {
      ++si;
      ++pi;
    } else if (pi < p.size() && p[pi] == '%') {
      star = pi++;
      mark = si;
    } else if (star != std::string_view::npos) {
      pi = star + 1;
      si = ++mark;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '%') ++pi;
  return pi == p.size();
}

std::optional<double> text_to_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s[0] == '+') s.remove_prefix(1);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

struct GroupCtx {
  const std::vector<Row>* rows = nullptr;
  const std::vector<std::size_t>* members = nullptr;
  const Row* outputs = nullptr;
};

class Evaluator {
 public:
  Cell eval(const BExpr& e, const Row& row, const GroupCtx* g = nullptr,
            const Row* outputs = nullptr) const {
    switch (e.k) {
      case K::kLit: return e.lit;
      case K::kCol: return row.empty() ? Cell{} : row[e.idx];
      case K::kOutRef: return outputs ? (*outputs)[e.idx] : Cell{};
      case K::kNeg: {
        auto v = eval(e.a[0], row, g, outputs);
        if (is_null(v)) return v;
        return -num(v);
      }
      case K::kNot: {
        auto v = truth(eval(e.a[0], row, g, outputs));
        if (!v) return std::monostate{};
        return !*v;
      }
      case K::kAnd:
      case K::kOr: {
        auto l = truth(eval(e.a[0], row, g, outputs));
        auto r = truth(eval(e.a[1], row, g, outputs));
        if (e.k == K::kAnd) {
          if ((l && !*l) || (r && !*r)) return false;
          if (l && r) return true;
          return std::monostate{};
        }
        if ((l && *l) || (r && *r)) return true;
        if (l && r) return false;
        return std::monostate{};
      }
      case K::kConcat: {
        auto l = eval(e.a[0], row, g, outputs);
        auto r = eval(e.a[1], row, g, outputs);
        if (is_null(l) || is_null(r)) return std::monostate{};
        return render_cell(l) + render_cell(r);
      }
      case K::kArith: {
        auto l = eval(e.a[0], row, g, outputs);
        auto r = eval(e.a[1], row, g, outputs);
        if (is_null(l) || is_null(r)) return std::monostate{};
        double x = num(l), y = num(r);
        switch (e.op[0]) {
          case '+': return finite_or_null(x + y);
          case '-': return finite_or_null(x - y);
          case '*': return finite_or_null(x * y);
          case '/':
            if (y == 0) return std::monostate{};
            if (integral(x) && integral(y)) return finite_or_null(std::trunc(x / y));
            return finite_or_null(x / y);
          case '%':
            if (y == 0) return std::monostate{};
            return finite_or_null(std::fmod(x, y));
        }
        return std::monostate{};
      }
      case K::kCmp: {
        auto l = eval(e.a[0], row, g, outputs);
        auto r = eval(e.a[1], row, g, outputs);
        if (is_null(l) || is_null(r)) return std::monostate{};
        int c = sql_compare(l, r);
        const auto& op = e.op;
        if (op == "=") return c == 0;
        if (op == "!=") return c != 0;
        if (op == "<") return c < 0;
        if (op == "<=") return c <= 0;
        if (op == ">") return c > 0;
        return c >= 0;
      }
      case K::kIsNull: {
        bool n = is_null(eval(e.a[0], row, g, outputs));
        return e.negated ? !n : n;
      }
      case K::kLike: {
        auto l = eval(e.a[0], row, g, outputs);
        auto r = eval(e.a[1], row, g, outputs);
        if (is_null(l) || is_null(r)) return std::monostate{};
        bool m = like_match(render_cell(l), render_cell(r));
        return e.negated ? !m : m;
      }
      case K::kIn: {
        auto l = eval(e.a[0], row, g, outputs);
        if (is_null(l)) return std::monostate{};
        bool saw_null = false;
        for (std::size_t i = 1; i < e.a.size(); ++i) {
          auto v = eval(e.a[i], row, g, outputs);
          if (is_null(v)) {
            saw_null = true;
            continue;
          }
          if (sql_compare(l, v) == 0) return !e.negated;
        }
        if (saw_null) return std::monostate{};
        return e.negated;
      }
      case K::kCast: {
        auto v = eval(e.a[0], row, g, outputs);
        if (is_null(v)) return v;
        if (e.op == "TEXT") return render_cell(v);
        if (e.op == "BOOLEAN") return num(v) != 0;
        std::optional<double> d;
        if (std::holds_alternative<double>(v) || std::holds_alternative<bool>(v)) {
          d = num(v);
        } else {
          d = text_to_number(render_cell(v));
        }
        if (!d) return std::monostate{};
        if (e.op == "INTEGER") return std::trunc(*d);
        return *d;
      }
      case K::kCase: {
        std::size_t pairs = (e.a.size() - (e.has_else ? 1 : 0)) / 2;
        for (std::size_t i = 0; i < pairs; ++i) {
          auto c = truth(eval(e.a[2 * i], row, g, outputs));
          if (c && *c) return coerce(eval(e.a[2 * i + 1], row, g, outputs), e.type);
        }
        if (e.has_else) return coerce(eval(e.a.back(), row, g, outputs), e.type);
        return std::monostate{};
      }
      case K::kFunc: return eval_func(e, row, g, outputs);
      case K::kAgg: {
        if (!g) return std::monostate{};
        return eval_agg(e, *g);
      }
    }
    return std::monostate{};
  }

 private:
  // CASE/COALESCE may mix booleans and numbers; store in the declared type.
  static Cell coerce(Cell v, SqlType t) {
    if (t && *t == ColumnType::kNumber && std::holds_alternative<bool>(v)) return num(v);
    return v;
  }

  Cell eval_func(const BExpr& e, const Row& row, const GroupCtx* g, const Row* outputs) const {
    std::vector<Cell> v;
    for (const auto& a : e.a) v.push_back(eval(a, row, g, outputs));
    if (e.op == "COALESCE") {
      for (auto& x : v) {
        if (!is_null(x)) return coerce(x, e.type);
      }
      return std::monostate{};
    }
    for (const auto& x : v) {
      if (is_null(x)) return std::monostate{};
    }
    if (e.op == "LOWER") return to_lower(render_cell(v[0]));
    if (e.op == "UPPER") return to_upper(render_cell(v[0]));
    if (e.op == "TRIM") return std::string(trim(render_cell(v[0])));
    if (e.op == "LENGTH") return static_cast<double>(render_cell(v[0]).size());
    if (e.op == "ABS") return std::abs(num(v[0]));
    if (e.op == "ROUND") {
      double digits = v.size() > 1 ? std::trunc(num(v[1])) : 0;
      if (digits < 0 || digits > 15) digits = std::clamp(digits, 0.0, 15.0);
      double scale = std::pow(10.0, digits);
      return finite_or_null(std::round(num(v[0]) * scale) / scale);
    }
    if (e.op == "SUBSTR") {
      std::string s = render_cell(v[0]);
      auto n = static_cast<long long>(s.size());
      long long start = static_cast<long long>(std::trunc(num(v[1])));
      long long len = v.size() > 2 ? static_cast<long long>(std::trunc(num(v[2]))) : n + 1;
      // SQLite: 1-based; non-positive start counts from the character before the string.
      long long from = start > 0 ? start - 1 : (start == 0 ? -1 : n + start);
      long long to = from + len;
      from = std::clamp(from, 0LL, n);
      to = std::clamp(to, 0LL, n);
      if (to <= from) return std::string{};
      return s.substr(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from));
    }
    return std::monostate{};
  }

  Cell eval_agg(const BExpr& e, const GroupCtx& g) const {
    const auto& rows = *g.rows;
    if (e.star) return static_cast<double>(g.members->size());
    std::vector<Cell> vals;
    for (auto i : *g.members) {
      auto v = eval(e.a[0], rows[i]);
      if (!is_null(v)) vals.push_back(std::move(v));
    }
    if (e.distinct) {
      std::vector<Cell> uniq;
      for (auto& v : vals) {
        bool dup = std::any_of(uniq.begin(), uniq.end(),
                               [&](const Cell& u) { return sql_compare(u, v) == 0; });
        if (!dup) uniq.push_back(std::move(v));
      }
      vals = std::move(uniq);
    }
    if (e.op == "COUNT") return static_cast<double>(vals.size());
    if (vals.empty()) return std::monostate{};
    if (e.op == "SUM" || e.op == "AVG") {
      double s = 0;
      for (const auto& v : vals) s += num(v);
      if (e.op == "AVG") s /= static_cast<double>(vals.size());
      return finite_or_null(s);
    }
    const Cell* best = &vals[0];
    for (const auto& v : vals) {
      int c = sql_compare(v, *best);
      if ((e.op == "MIN" && c < 0) || (e.op == "MAX" && c > 0)) best = &v;
    }
    return *best;
  }
};

struct KeyLess {
  bool operator()(const std::vector<Cell>& a, const std::vector<Cell>& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto c = compare_cells(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

std::vector<Column> output_schema(const Binder::Bound& b) {
  std::vector<Column> cols;
  std::set<std::string> used;
  for (const auto& it : b.items) {
    std::string name = it.name;
    if (used.count(name)) {
      for (int k = 2;; ++k) {
        std::string candidate = it.name + "_" + std::to_string(k);
        if (!used.count(candidate)) {
          name = candidate;
          break;
        }
      }
    }
    used.insert(name);
    cols.push_back({name, it.expr.type ? *it.expr.type : ColumnType::kText});
  }
  return cols;
}

// Cells produced for a declared column type; refs survive only when the
// column itself is a ref column.
Cell conform(Cell v, ColumnType t) {
  if (cell_matches(v, t)) return v;
  if (t == ColumnType::kText) return render_cell(v);
  if (t == ColumnType::kNumber) {
    if (std::holds_alternative<bool>(v)) return num(v);
    if (auto d = text_to_number(render_cell(v))) return *d;
  }
  return std::monostate{};
}

Relation run(const Binder::Bound& b) {
  Evaluator ev;
  // FROM + joins, nested loops.
  std::vector<Row> rows;
  for (const auto& r : b.tables[0]->rows()) rows.push_back(r);
  for (std::size_t j = 1; j < b.tables.size(); ++j) {
    std::vector<Row> joined;
    const auto& on = b.join_on[j - 1];
    for (const auto& l : rows) {
      for (const auto& r : b.tables[j]->rows()) {
        Row combined = l;
        combined.insert(combined.end(), r.begin(), r.end());
        if (on) {
          auto t = truth(ev.eval(*on, combined));
          if (!t || !*t) continue;
        }
        joined.push_back(std::move(combined));
      }
    }
    rows = std::move(joined);
  }
  if (b.where) {
    std::vector<Row> kept;
    for (auto& r : rows) {
      auto t = truth(ev.eval(*b.where, r));
      if (t && *t) kept.push_back(std::move(r));
    }
    rows = std::move(kept);
  }

  auto schema = output_schema(b);
  std::vector<Row> out_rows;
  std::vector<std::vector<Cell>> order_keys;

  auto emit = [&](const Row& src, const GroupCtx* g) {
    Row out;
    for (std::size_t i = 0; i < b.items.size(); ++i) {
      out.push_back(conform(ev.eval(b.items[i].expr, src, g), schema[i].type));
    }
    std::vector<Cell> keys;
    for (const auto& [expr, desc] : b.order_by) keys.push_back(ev.eval(expr, src, g, &out));
    out_rows.push_back(std::move(out));
    order_keys.push_back(std::move(keys));
  };

  if (b.aggregate) {
    std::map<std::vector<Cell>, std::vector<std::size_t>, KeyLess> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::vector<Cell> key;
      for (const auto& gexpr : b.group_by) key.push_back(ev.eval(gexpr, rows[i]));
      groups[std::move(key)].push_back(i);
    }
    if (b.group_by.empty() && groups.empty()) groups[{}] = {};
    static const Row kEmptyRow;
    for (const auto& [key, members] : groups) {
      GroupCtx g{&rows, &members, nullptr};
      const Row& first = members.empty() ? kEmptyRow : rows[members.front()];
      if (b.having) {
        // HAVING may reference select aliases: evaluate outputs first.
        Row out;
        for (std::size_t i = 0; i < b.items.size(); ++i) {
          out.push_back(conform(ev.eval(b.items[i].expr, first, &g), schema[i].type));
        }
        auto t = truth(ev.eval(*b.having, first, &g, &out));
        if (!t || !*t) continue;
      }
      emit(first, &g);
    }
  } else {
    for (const auto& r : rows) emit(r, nullptr);
  }

  std::vector<std::size_t> idx(out_rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (!b.order_by.empty()) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      for (std::size_t k = 0; k < b.order_by.size(); ++k) {
        const Cell& a = order_keys[x][k];
        const Cell& c = order_keys[y][k];
        int cmp;
        if (is_null(a) || is_null(c)) {
          cmp = is_null(a) == is_null(c) ? 0 : (is_null(a) ? -1 : 1);
        } else {
          cmp = sql_compare(a, c);
        }
        if (cmp == 0) continue;
        return b.order_by[k].second ? cmp > 0 : cmp < 0;
      }
      return false;
    });
  }
  std::vector<Row> ordered;
  ordered.reserve(idx.size());
  for (auto i : idx) ordered.push_back(std::move(out_rows[i]));

  return Relation(std::move(schema), std::move(ordered));
}

}  // namespace

std::vector<Column> check_sql(std::string_view sql, const Environment& env) {
  auto stmt = parse_select(sql);
  Binder binder(stmt, env);
  return output_schema(binder.bind());
}

Relation execute_sql(std::string_view sql, const Environment& env) {
  auto stmt = parse_select(sql);
  Binder binder(stmt, env);
  auto bound = binder.bind();
  Relation rel = run(bound);
  std::vector<Row> rows = rel.rows();
  if (stmt.distinct) {
    std::vector<Row> uniq;
    for (auto& r : rows) {
      bool dup = std::any_of(uniq.begin(), uniq.end(), [&](const Row& u) {
        for (std::size_t i = 0; i < u.size(); ++i) {
          if (is_null(u[i]) != is_null(r[i])) return false;
          if (!is_null(u[i]) && sql_compare(u[i], r[i]) != 0) return false;
        }
        return true;
      });
      if (!dup) uniq.push_back(std::move(r));
    }
    rows = std::move(uniq);
  }
  std::size_t from = stmt.offset ? static_cast<std::size_t>(*stmt.offset) : 0;
  std::size_t count = stmt.limit ? static_cast<std::size_t>(*stmt.limit) : rows.size();
  std::vector<Row> window;
  for (std::size_t i = from; i < rows.size() && window.size() < count; ++i) {
    window.push_back(std::move(rows[i]));
  }
  return Relation(rel.schema(), std::move(window));
}

}  // namespace lakeq::sql
