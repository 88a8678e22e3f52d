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

// In-process engine for a read-only SQL subset:
//
//   SELECT [DISTINCT] items FROM t [alias]
//     { [INNER] JOIN u [alias] ON cond | CROSS JOIN u [alias] | , u [alias] }
//     [WHERE cond] [GROUP BY exprs] [HAVING cond]
//     [ORDER BY expr [ASC|DESC], ...] [LIMIT n [OFFSET m]]
//
// Expressions: column refs (optionally qualified), literals, arithmetic,
// ||, comparisons, AND/OR/NOT, [NOT] LIKE, [NOT] IN (...), [NOT] BETWEEN,
// IS [NOT] NULL, CASE WHEN, CAST(x AS type), MIN/MAX/SUM/AVG/COUNT and a few
// scalar functions. Comparisons use three-valued logic; aggregates skip
// NULLs. GROUP BY output comes out ordered by group key unless ORDER BY says
// otherwise; everything else preserves input order.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/environment.hpp"
#include "common/value.hpp"

namespace lakeq::sql {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  kLiteral, kColumn, kUnary, kBinary, kFunction, kCast, kCase, kIn, kLike,
  kIsNull, kStar,
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  Cell literal;
  std::string qualifier;      // kColumn
  std::string name;           // column / function name / operator / cast type
  bool negated = false;       // NOT IN, NOT LIKE, IS NOT NULL
  bool distinct = false;      // COUNT(DISTINCT x)
  std::vector<ExprPtr> args;  // CASE: [when, then]* [else]
  bool has_else = false;
  std::string text;           // source text, used for derived column names
};

struct SelectItem {
  bool star = false;
  std::string star_qualifier;
  ExprPtr expr;
  std::string alias;
};

struct TableRef {
  std::string name;
  std::string alias;
  const std::string& label() const { return alias.empty() ? name : alias; }
};

struct Join {
  TableRef table;
  ExprPtr on;  // null for CROSS JOIN / comma
};

struct OrderItem {
  ExprPtr expr;
  bool descending = false;
};

struct SelectStmt {
  bool distinct = false;
  std::vector<SelectItem> items;
  TableRef from;
  std::vector<Join> joins;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
  std::vector<OrderItem> order_by;
  std::optional<long long> limit;
  std::optional<long long> offset;
};

// Rejects anything whose first keyword is not SELECT, and stacked
// statements, with Error(kSecurity). Runs before any parsing.
void ensure_select_only(std::string_view sql);

// Guard + parse. Throws Error(kSecurity) or Error(kParse).
SelectStmt parse_select(std::string_view sql);

// Table names in FROM/JOIN, in order of appearance.
std::vector<std::string> referenced_tables(const SelectStmt& stmt);

// Guard, parse and bind against env without executing. Returns the output
// schema; throws kSecurity, kParse, kBinding or kType.
std::vector<Column> check_sql(std::string_view sql, const Environment& env);

// Guard, parse, bind, execute.
Relation execute_sql(std::string_view sql, const Environment& env);

}  // namespace lakeq::sql
