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

#include "operators/operators.hpp"

#include "common/error.hpp"
#include "common/log.hpp"
#include "common/text.hpp"
#include "prompting/prompting.hpp"
#include "sql/sql.hpp"
#include "udf/expr.hpp"

namespace lakeq {

namespace {

std::size_t require_column(const Relation& rel, std::string_view column, ColumnType type,
                           std::string_view op) {
  auto idx = rel.find_column(column);
  if (!idx) {
    fail(ErrorKind::kBinding, std::string(op) + ": unknown column '" + std::string(column) + "' " +
                                  rel.schema_string());
  }
  if (rel.column(*idx).type != type) {
    fail(ErrorKind::kBinding, std::string(op) + ": column '" + std::string(column) + "' has type " +
                                  to_string(rel.column(*idx).type) + ", expected " + to_string(type));
  }
  return *idx;
}

void require_new_column(const Relation& rel, std::string_view column, std::string_view op) {
  if (trim(column).empty()) fail(ErrorKind::kBinding, std::string(op) + ": empty output column name");
  if (rel.find_column(column)) {
    fail(ErrorKind::kBinding, std::string(op) + ": column '" + std::string(column) + "' already exists");
  }
}

const std::string& ref_path(const Cell& c) {
  if (const auto* i = std::get_if<ImageRef>(&c)) return i->path;
  return std::get<TextRef>(c).path;
}

}  // namespace

Relation visual_qa(const Relation& input, std::string_view image_column, std::string_view question,
                   std::string_view out_column, QaBackend& qa) {
  auto col = require_column(input, image_column, ColumnType::kImage, "visual_qa");
  require_new_column(input, out_column, "visual_qa");
  std::vector<Cell> answers;
  std::string q(question);
  for (const auto& row : input.rows()) {
    if (is_null(row[col])) {
      answers.emplace_back(std::monostate{});
    } else {
      answers.emplace_back(std::string(trim(qa.answer(ref_path(row[col]), q))));
    }
  }
  return input.with_column({std::string(out_column), ColumnType::kText}, std::move(answers));
}

std::string instantiate_template(std::string_view tmpl, const Relation& input, const Row& row) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    auto open = tmpl.find('{', pos);
    auto close = open == std::string_view::npos ? open : tmpl.find('}', open + 1);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    std::string name(trim(tmpl.substr(open + 1, close - open - 1)));
    auto idx = input.find_column(name);
    if (!idx) {
      fail(ErrorKind::kBinding, "text_qa: placeholder {" + name + "} does not name a column of " +
                                    input.schema_string());
    }
    out += render_cell(row[*idx]);
    pos = close + 1;
  }
  return out;
}

Relation text_qa(const Relation& input, std::string_view text_column,
                 std::string_view question_template, std::string_view out_column, QaBackend& qa) {
  auto col = require_column(input, text_column, ColumnType::kDocument, "text_qa");
  require_new_column(input, out_column, "text_qa");
  for (const auto& ph : template_placeholders(question_template)) {
    if (!input.find_column(ph)) {
      fail(ErrorKind::kBinding, "text_qa: placeholder {" + ph + "} does not name a column of " +
                                    input.schema_string());
    }
  }
  std::vector<Cell> answers;
  for (const auto& row : input.rows()) {
    if (is_null(row[col])) {
      answers.emplace_back(std::monostate{});
      continue;
    }
    auto question = instantiate_template(question_template, input, row);
    answers.emplace_back(std::string(trim(qa.answer(ref_path(row[col]), question))));
  }
  return input.with_column({std::string(out_column), ColumnType::kText}, std::move(answers));
}

std::string image_select_question(std::string_view description) {
  return "Does this image show: " + std::string(trim(description)) + "?";
}

Relation image_select(const Relation& input, std::string_view image_column,
                      std::string_view description, QaBackend& qa) {
  auto col = require_column(input, image_column, ColumnType::kImage, "image_select");
  auto question = image_select_question(description);
  Relation out(input.schema());
  for (const auto& row : input.rows()) {
    if (is_null(row[col])) continue;
    if (to_lower(trim(qa.answer(ref_path(row[col]), question))) == "yes") out.add_row(row);
  }
  return out;
}

UdfResult udf_transform(const Relation& input, std::string_view description,
                        std::string_view out_column, ChatClient& llm) {
  require_new_column(input, out_column, "udf_transform");
  std::optional<std::string> feedback;
  std::string last_error;
  for (std::size_t attempt = 1; attempt <= 2; ++attempt) {
    auto prompt = prompting::build_udf_prompt(description, input, out_column, feedback);
    auto response = llm.complete(prompt.request(Phase::kUdf));
    auto blocks = fenced_blocks(response);
    std::string source;
    try {
      if (blocks.empty()) fail(ErrorKind::kParse, "the answer has no fenced block with an expression");
      source = std::string(trim(blocks.front().body));
      auto expr = udf::parse_expr(source);
      auto type = udf::typecheck(*expr, input.schema());
      auto col_type = udf::result_column_type(type);
      std::vector<Cell> values;
      for (const auto& row : input.rows()) {
        Cell v;
        try {
          v = udf::evaluate(*expr, input.schema(), row);
        } catch (const std::exception& e) {
          logger().warn("udf_transform: evaluation failed on a row ({}); using NULL", e.what());
        }
        if (!is_null(v) && !cell_matches(v, col_type)) v = std::monostate{};
        values.push_back(std::move(v));
      }
      return {input.with_column({std::string(out_column), col_type}, std::move(values)), source, attempt};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kParse && e.kind() != ErrorKind::kType &&
          e.kind() != ErrorKind::kBinding) {
        throw;
      }
      last_error = source.empty() ? e.what() : "expression `" + source + "`: " + e.what();
      feedback = last_error;
    }
  }
  fail(ErrorKind::kOperator, "udf_transform could not obtain a valid expression for '" +
                                 std::string(description) + "': " + last_error);
}

namespace {

ArgSpec make_arg(std::string name, ArgKind kind, std::string description) {
  ArgSpec a;
  a.name = std::move(name);
  a.kind = kind;
  a.description = std::move(description);
  return a;
}

}  // namespace

const OperatorSet& default_operators() {
  static const OperatorSet kOps([] {
    std::vector<OperatorSpec> specs;
    auto relation_arg = [](std::string description) {
      return make_arg("input", ArgKind::kRelation, std::move(description));
    };

    specs.push_back(OperatorSpec{
        "sql",
        "Runs one SQL SELECT statement over the available relations (tables are referred to by "
        "their relation names). Supports joins (JOIN ... ON, CROSS JOIN), WHERE, GROUP BY with "
        "MIN/MAX/SUM/AVG/COUNT, HAVING, ORDER BY, LIMIT, CASE and CAST. Text that holds numbers "
        "must be CAST(... AS INTEGER) or CAST(... AS REAL) before numeric comparison or "
        "aggregation. Only SELECT statements are allowed.",
        "Select, filter, join, group, aggregate and sort tables with relational operations.",
        {make_arg("query", ArgKind::kSql, "the SELECT statement")},
        OutputKind::kRelation,
        R"({"query": "SELECT name, COUNT(*) AS n FROM r1 GROUP BY name"})"});

    ArgSpec img = make_arg("image_column", ArgKind::kColumn, "the column holding the images");
    img.allowed_types = {ColumnType::kImage};
    specs.push_back(OperatorSpec{
        "visual_qa",
        "Looks at the image in every row and answers the same question about it, e.g. what is "
        "depicted or how many objects of some kind are visible. The answers are added as a new "
        "text column (\"yes\"/\"no\" for yes-no questions, digits for counts).",
        "Look at images and answer a question about each of them (what is depicted, how many "
        "objects are visible, ...).",
        {relation_arg("relation with an IMAGE column"), img,
         make_arg("question", ArgKind::kString, "the question asked about every image"),
         make_arg("out_column", ArgKind::kNewColumn, "name of the new answer column")},
        OutputKind::kRelation,
        R"({"input": "painting_images", "image_column": "image", "question": "Is there a dog in the image?", "out_column": "has_dog"})"});

    ArgSpec doc = make_arg("text_column", ArgKind::kColumn, "the column holding the documents");
    doc.allowed_types = {ColumnType::kDocument};
    specs.push_back(OperatorSpec{
        "text_qa",
        "Reads the document in every row and answers a question about it. The question is a "
        "template: {column} placeholders are replaced by that row's values, so one template asks "
        "a different question per row. The answers are added as a new text column; \"unknown\" "
        "means the document does not answer the question.",
        "Read text documents and extract information from each of them by answering a question.",
        {relation_arg("relation with a DOCUMENT column"), doc,
         make_arg("question_template", ArgKind::kTemplate, "question, may contain {column} placeholders"),
         make_arg("out_column", ArgKind::kNewColumn, "name of the new answer column")},
        OutputKind::kRelation,
        R"({"input": "r1", "text_column": "report", "question_template": "Who won the game against {name}?", "out_column": "winner"})"});

    ArgSpec sel = make_arg("image_column", ArgKind::kColumn, "the column holding the images");
    sel.allowed_types = {ColumnType::kImage};
    specs.push_back(OperatorSpec{
        "image_select",
        "Keeps only the rows whose image matches a short description of its content; all other "
        "rows are dropped. The schema stays the same.",
        "Select the images that show something matching a description.",
        {relation_arg("relation with an IMAGE column"), sel,
         make_arg("description", ArgKind::kString, "what the kept images must show")},
        OutputKind::kRelation,
        R"({"input": "painting_images", "image_column": "image", "description": "a ship at sea"})"});

    specs.push_back(OperatorSpec{
        "udf_transform",
        "Computes a new column from the existing columns of every row, e.g. to extract part of a "
        "text value, convert formats or do arithmetic. Describe the computation in words; it is "
        "turned into an expression automatically.",
        "Transform values of a table row by row with a computation described in words (e.g. "
        "extract a number from a text column).",
        {relation_arg("the relation to extend"),
         make_arg("description", ArgKind::kString, "what to compute, in words, naming the input columns"),
         make_arg("out_column", ArgKind::kNewColumn, "name of the new column")},
        OutputKind::kRelation,
        R"({"input": "r2", "description": "the year of the release_date column as a number", "out_column": "year"})"});

    ArgSpec kind = make_arg("kind", ArgKind::kChoice, "chart type");
    kind.choices = {"bar", "line", "scatter"};
    ArgSpec y = make_arg("y", ArgKind::kColumn, "column for the y axis");
    y.allowed_types = {ColumnType::kNumber};
    ArgSpec title = make_arg("title", ArgKind::kString, "chart title");
    title.required = false;
    specs.push_back(OperatorSpec{
        "plot",
        "Draws a chart from two columns of a relation, one point or bar per row. The y column "
        "must be numeric. This is the final step of a plan that asks for a plot.",
        "Plot the values of a table as a bar, line or scatter chart.",
        {relation_arg("relation to plot"), kind,
         make_arg("x", ArgKind::kColumn, "column for the x axis"), y, title},
        OutputKind::kPlot,
        R"({"input": "r3", "kind": "bar", "x": "decade", "y": "movies", "title": "Movies per decade"})"});
    return OperatorSet(std::move(specs));
  }());
  return kOps;
}

namespace {

const std::string& arg(const PhysicalStep& step, const std::string& name) {
  auto it = step.args.find(name);
  if (it == step.args.end()) {
    fail(ErrorKind::kBinding, step.op + ": missing argument '" + name + "'");
  }
  const auto* s = std::get_if<std::string>(&it->second);
  if (!s) fail(ErrorKind::kBinding, step.op + ": argument '" + name + "' must be a single string");
  return *s;
}

std::string arg_or(const PhysicalStep& step, const std::string& name, std::string fallback) {
  auto it = step.args.find(name);
  if (it == step.args.end()) return fallback;
  return arg(step, name);
}

const Relation& input_relation(const PhysicalStep& step, const Environment& env) {
  const auto& name = arg(step, "input");
  const Relation* rel = env.find(name);
  if (!rel) {
    fail(ErrorKind::kBinding, step.op + ": unknown relation '" + name + "' (available: " +
                                  join(env.names(), ", ") + ")");
  }
  return *rel;
}

}  // namespace

OperatorOutput execute_operator(const PhysicalStep& step, const Environment& env,
                                OperatorContext& ctx) {
  const auto& op = step.op;
  if (op == "sql") return {sql::execute_sql(arg(step, "query"), env), std::nullopt, std::nullopt};
  if (op == "visual_qa" || op == "text_qa" || op == "image_select") {
    if (!ctx.qa) fail(ErrorKind::kInternal, op + ": no QA backend configured");
  }
  if (op == "visual_qa") {
    return {visual_qa(input_relation(step, env), arg(step, "image_column"), arg(step, "question"),
                      arg(step, "out_column"), *ctx.qa),
            std::nullopt, std::nullopt};
  }
  if (op == "text_qa") {
    return {text_qa(input_relation(step, env), arg(step, "text_column"),
                    arg(step, "question_template"), arg(step, "out_column"), *ctx.qa),
            std::nullopt, std::nullopt};
  }
  if (op == "image_select") {
    return {image_select(input_relation(step, env), arg(step, "image_column"),
                         arg(step, "description"), *ctx.qa),
            std::nullopt, std::nullopt};
  }
  if (op == "udf_transform") {
    if (!ctx.llm) fail(ErrorKind::kInternal, "udf_transform: no language model configured");
    auto r = udf_transform(input_relation(step, env), arg(step, "description"),
                           arg(step, "out_column"), *ctx.llm);
    return {std::move(r.relation), std::nullopt, std::move(r.expression)};
  }
  if (op == "plot") {
    auto spec = make_plot(input_relation(step, env), arg(step, "kind"), arg(step, "x"),
                          arg(step, "y"), arg_or(step, "title", ""));
    std::vector<Column> schema;
    const auto& in = input_relation(step, env);
    schema.push_back(in.column(*in.find_column(spec.x)));
    if (spec.y != spec.x) schema.push_back(in.column(*in.find_column(spec.y)));
    Relation data(schema);
    for (const auto& [x, y] : spec.data) {
      if (spec.y != spec.x) {
        data.add_row({x, y});
      } else {
        data.add_row({x});
      }
    }
    return {std::move(data), std::move(spec), std::nullopt};
  }
  fail(ErrorKind::kBinding, "unknown operator '" + op + "'");
}

}  // namespace lakeq
