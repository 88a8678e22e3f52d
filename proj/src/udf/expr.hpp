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

// Row-expression language used by udf_transform.
//
// The grammar has no loops, recursion, assignment or I/O, so every
// expression is a finite tree and evaluation always terminates. Evaluation
// is total: bad input turns into NULL rather than an exception.
//
//   expr    := or
//   or      := and ("or" and)*
//   and     := not ("and" not)*
//   not     := "not" not | cmp
//   cmp     := add (("="|"=="|"!="|"<>"|"<"|"<="|">"|">=") add)?
//   add     := mul (("+"|"-") mul)*
//   mul     := unary (("*"|"/"|"%") unary)*
//   unary   := "-" unary | atom
//   atom    := number | string | true | false | null | "(" expr ")"
//            | ident "(" [expr ("," expr)*] ")" | ident
//
// `col(name)` and a bare identifier both reference a column.

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "common/value.hpp"

namespace lakeq::udf {

enum class NodeKind { kLiteral, kColumn, kUnary, kBinary, kCall };

enum class Op {
  kAdd, kSub, kMul, kDiv, kMod,
  kEq, kNe, kLt, kLe, kGt, kGe,
  kAnd, kOr,
  kNot, kNeg,
};

const char* op_symbol(Op op);

using Literal = std::variant<std::monostate, double, std::string, bool>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  NodeKind kind = NodeKind::kLiteral;
  Literal literal;
  std::string name;  // column name or function name
  Op op = Op::kAdd;
  std::vector<ExprPtr> args;
  std::size_t pos = 0;  // byte offset in the source, for diagnostics

  static ExprPtr make_literal(Literal v, std::size_t pos = 0);
  static ExprPtr make_column(std::string name, std::size_t pos = 0);
  static ExprPtr make_unary(Op op, ExprPtr operand, std::size_t pos = 0);
  static ExprPtr make_binary(Op op, ExprPtr lhs, ExprPtr rhs, std::size_t pos = 0);
  static ExprPtr make_call(std::string fn, std::vector<ExprPtr> args, std::size_t pos = 0);
};

// Structural equality; source positions are ignored.
bool same_structure(const Expr& a, const Expr& b);
std::size_t depth(const Expr& e);

// Throws Error(kParse) with the byte position and the expected-token set.
ExprPtr parse_expr(std::string_view source);

// Canonical, fully parenthesized source text. parse_expr(render(e)) is
// structurally equal to e.
std::string render(const Expr& e);

enum class BaseType { kNumber, kText, kBoolean, kNull };

struct ExprType {
  BaseType base = BaseType::kNull;
  bool nullable = true;
  friend bool operator==(const ExprType&, const ExprType&) = default;
};

std::string to_string(ExprType t);

// Assigns a type to every node; throws Error(kBinding) for unknown columns
// and Error(kType) for ill-typed expressions. Returns the root type.
ExprType typecheck(const Expr& e, const std::vector<Column>& schema);

// Column type a UDF result lands in.
ColumnType result_column_type(ExprType t);

// Total evaluation against one row of a relation with the given schema.
// Returns monostate, double, std::string or bool.
Cell evaluate(const Expr& e, const std::vector<Column>& schema, const Row& row);

// Names and signatures of the builtins, for the language reference.
std::vector<std::string> builtin_signatures();

}  // namespace lakeq::udf
