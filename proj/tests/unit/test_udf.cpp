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


#include <random>

#include "doctest.h"
#include "operators/operators.hpp"
#include "support.hpp"
#include "udf/expr.hpp"

using namespace lakeq;

namespace {

const char* kCentury = "floor((inception - 1) / 100) + 1";

// Integer arithmetic, independent of the expression language.
long long century_oracle(long long year) { return (year - 1) / 100 + 1; }

Cell eval_on(const std::string& source, const std::vector<Column>& schema, const Row& row) {
  auto e = udf::parse_expr(source);
  return udf::evaluate(*e, schema, row);
}

}  // namespace

TEST_CASE("century golden values") {
  const std::vector<Column> schema = {{"inception", ColumnType::kNumber}};
  for (long long year : {1503LL, 1600LL, 1601LL, 2000LL, 2001LL}) {
    CAPTURE(year);
    auto v = eval_on(kCentury, schema, {static_cast<double>(year)});
    REQUIRE(std::holds_alternative<double>(v));
    CHECK(std::get<double>(v) == static_cast<double>(century_oracle(year)));
  }
  CHECK(century_oracle(1503) == 16);
  CHECK(century_oracle(1600) == 16);
  CHECK(century_oracle(1601) == 17);
  CHECK(century_oracle(2000) == 20);
  CHECK(century_oracle(2001) == 21);
}

TEST_CASE("century of a missing or non-numeric inception is NULL") {
  const std::vector<Column> num = {{"inception", ColumnType::kNumber}};
  CHECK(is_null(eval_on(kCentury, num, {Cell{}})));
  // A mistyped cell does not raise; evaluation is total.
  CHECK(is_null(eval_on(kCentury, num, {std::string("circa 1600")})));

  const std::vector<Column> text = {{"inception", ColumnType::kText}};
  const char* from_text = "floor((parse_int(inception) - 1) / 100) + 1";
  CHECK(eval_on(from_text, text, {std::string("1601")}) == Cell{17.0});
  CHECK(is_null(eval_on(from_text, text, {std::string("unknown")})));
  CHECK(is_null(eval_on(from_text, text, {std::string("16th c.")})));
}

TEST_CASE("udf_transform applies the model's expression to every row") {
  Relation input({{"title", ColumnType::kText}, {"inception", ColumnType::kNumber}},
                 {{std::string("a"), 1503.0}, {std::string("b"), 1600.0}, {std::string("c"), 1601.0},
                  {std::string("d"), 2000.0}, {std::string("e"), 2001.0}, {std::string("f"), Cell{}}});
  auto llm = testing::scripted({{"udf", {testing::udf_text(kCentury)}}});
  auto r = udf_transform(input, "century from inception", "century", *llm);
  CHECK(r.attempts == 1);
  REQUIRE(r.relation.arity() == 3);
  CHECK(r.relation.column(2) == Column{"century", ColumnType::kNumber});
  std::vector<Cell> got;
  for (const auto& row : r.relation.rows()) got.push_back(row[2]);
  CHECK(got == std::vector<Cell>{16.0, 16.0, 17.0, 20.0, 21.0, Cell{}});
}

TEST_CASE("udf_transform reprompts once, then gives up") {
  Relation input({{"inception", ColumnType::kNumber}}, {{1503.0}});
  auto fixed = testing::scripted({{"udf", {testing::udf_text("inception +"), testing::udf_text(kCentury)}}});
  auto r = udf_transform(input, "century", "century", *fixed);
  CHECK(r.attempts == 2);
  CHECK(r.relation.rows()[0][1] == Cell{16.0});

  auto broken = testing::scripted({{"udf", {testing::udf_text("nope + 1"), testing::udf_text("upper(inception)")}}});
  try {
    udf_transform(input, "century", "century", *broken);
    FAIL("expected an operator error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOperator);
  }
}

TEST_CASE("parse errors carry the position") {
  try {
    udf::parse_expr("1 + (2 * ");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find('9') != std::string::npos);
  }
  // Unknown functions parse as calls and fail the type check.
  CHECK_THROWS_AS(udf::typecheck(*udf::parse_expr("while(1)"), {}), Error);
  CHECK_THROWS_AS(udf::parse_expr("x = 1; y"), Error);
}

TEST_CASE("typecheck rejects unknown columns and ill-typed operations") {
  const std::vector<Column> schema = {{"n", ColumnType::kNumber}, {"s", ColumnType::kText}};
  auto kind = [&](const char* src) {
    try {
      udf::typecheck(*udf::parse_expr(src), schema);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kInternal;
  };
  CHECK(kind("missing + 1") == ErrorKind::kBinding);
  CHECK(kind("s - 1") == ErrorKind::kType);
  CHECK(kind("upper(n)") == ErrorKind::kType);
  CHECK(kind("nosuchfn(n)") != ErrorKind::kInternal);
  CHECK(udf::typecheck(*udf::parse_expr("concat(s, \"!\")"), schema).base == udf::BaseType::kText);
  CHECK(udf::result_column_type(udf::typecheck(*udf::parse_expr("n > 1"), schema)) == ColumnType::kBoolean);
}

namespace {

struct ExprGen {
  std::mt19937_64 rng;
  int below(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

  udf::ExprPtr make(int depth) {
    using udf::Expr;
    using udf::Op;
    int r = below(depth > 0 ? 9 : 4);
    switch (r) {
      case 0: return Expr::make_literal(static_cast<double>(below(50)) / 4.0);
      case 1: return Expr::make_literal(std::string(below(2) ? "x y" : ""));
      case 2: return Expr::make_column(below(2) ? "n" : "s");
      case 3: return Expr::make_literal(below(2) == 0 ? udf::Literal{true} : udf::Literal{});
      case 4:
      case 5: {
        static const Op ops[] = {Op::kAdd, Op::kSub, Op::kMul, Op::kDiv, Op::kMod, Op::kEq, Op::kNe,
                                 Op::kLt,  Op::kLe,  Op::kGt,  Op::kGe,  Op::kAnd, Op::kOr};
        return Expr::make_binary(ops[below(13)], make(depth - 1), make(depth - 1));
      }
      case 6: return Expr::make_unary(below(2) ? Op::kNot : Op::kNeg, make(depth - 1));
      case 7: return Expr::make_call("floor", {make(depth - 1)});
      default: return Expr::make_call("concat", {make(depth - 1), make(depth - 1)});
    }
  }
};

}  // namespace

TEST_CASE("render and parse round-trip, and evaluation is total") {
  ExprGen gen{std::mt19937_64(42)};
  const std::vector<Column> schema = {{"n", ColumnType::kNumber}, {"s", ColumnType::kText}};
  const std::vector<Row> rows = {{3.0, std::string("abc")}, {Cell{}, Cell{}}, {0.0, std::string("")}};
  for (int i = 0; i < 500; ++i) {
    auto e = gen.make(4);
    auto text = udf::render(*e);
    CAPTURE(text);
    auto back = udf::parse_expr(text);
    CHECK(udf::same_structure(*e, *back));
    CHECK(udf::depth(*back) == udf::depth(*e));
    for (const auto& row : rows) CHECK_NOTHROW(udf::evaluate(*e, schema, row));
  }
}

TEST_CASE("division by zero and bad text give NULL") {
  const std::vector<Column> schema = {{"n", ColumnType::kNumber}, {"s", ColumnType::kText}};
  CHECK(is_null(eval_on("n / 0", schema, {1.0, std::string("a")})));
  CHECK(is_null(eval_on("n % 0", schema, {1.0, std::string("a")})));
  CHECK(is_null(eval_on("parse_float(s)", schema, {1.0, std::string("1.5x")})));
  CHECK(eval_on("parse_float(s)", schema, {1.0, std::string("1.5")}) == Cell{1.5});
  CHECK(eval_on("split(s, \"-\", 1)", schema, {1.0, std::string("a-b-c")}) == Cell{std::string("b")});
  CHECK(is_null(eval_on("split(s, \"-\", 5)", schema, {1.0, std::string("a-b-c")})));
  CHECK(eval_on("round(2.5)", schema, {1.0, std::string("")}) == Cell{3.0});
  CHECK(eval_on("round(-2.5)", schema, {1.0, std::string("")}) == Cell{-3.0});
}
