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

#include "common/value.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "common/error.hpp"

namespace lakeq {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kIo: return "io error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kBinding: return "binding error";
    case ErrorKind::kType: return "type error";
    case ErrorKind::kSecurity: return "security rejection";
    case ErrorKind::kBackend: return "backend error";
    case ErrorKind::kReplayMiss: return "replay miss";
    case ErrorKind::kExhausted: return "fixture exhausted";
    case ErrorKind::kOperator: return "operator error";
    case ErrorKind::kQueryFailed: return "query failed";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

const char* to_string(ColumnType type) {
  switch (type) {
    case ColumnType::kText: return "TEXT";
    case ColumnType::kNumber: return "NUMBER";
    case ColumnType::kBoolean: return "BOOLEAN";
    case ColumnType::kImage: return "IMAGE";
    case ColumnType::kDocument: return "DOCUMENT";
  }
  return "TEXT";
}

std::optional<ColumnType> parse_column_type(std::string_view text) {
  if (text == "TEXT") return ColumnType::kText;
  if (text == "NUMBER") return ColumnType::kNumber;
  if (text == "BOOLEAN") return ColumnType::kBoolean;
  if (text == "IMAGE") return ColumnType::kImage;
  if (text == "DOCUMENT") return ColumnType::kDocument;
  return std::nullopt;
}

bool cell_matches(const Cell& cell, ColumnType type) {
  if (is_null(cell)) return true;
  switch (type) {
    case ColumnType::kText: return std::holds_alternative<std::string>(cell);
    case ColumnType::kNumber: return std::holds_alternative<double>(cell);
    case ColumnType::kBoolean: return std::holds_alternative<bool>(cell);
    case ColumnType::kImage: return std::holds_alternative<ImageRef>(cell);
    case ColumnType::kDocument: return std::holds_alternative<TextRef>(cell);
  }
  return false;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Infinity" : "-Infinity";
  if (value == 0.0) return "0";
  if (std::abs(value) < 1e15 && value == std::trunc(value)) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string render_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NULL"; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const ImageRef& r) const { return r.path; }
    std::string operator()(const TextRef& r) const { return r.path; }
  };
  return std::visit(Visitor{}, cell);
}

std::string quote_cell(const Cell& cell) {
  if (std::holds_alternative<std::string>(cell) ||
      std::holds_alternative<ImageRef>(cell) ||
      std::holds_alternative<TextRef>(cell)) {
    return nlohmann::json(render_cell(cell)).dump();
  }
  return render_cell(cell);
}

namespace {

int rank_of(const Cell& c) {
  switch (c.index()) {
    case 0: return 0;  // null
    case 1: return 1;  // number
    case 3: return 1;  // bool compares as number
    case 2: return 2;  // text
    case 4: return 3;
    case 5: return 4;
  }
  return 5;
}

double numeric_of(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return *d;
  return std::get<bool>(c) ? 1.0 : 0.0;
}

}  // namespace

std::weak_ordering compare_cells(const Cell& a, const Cell& b) {
  int ra = rank_of(a), rb = rank_of(b);
  if (ra != rb) return ra <=> rb;
  switch (ra) {
    case 0: return std::weak_ordering::equivalent;
    case 1: {
      double x = numeric_of(a), y = numeric_of(b);
      if (x < y) return std::weak_ordering::less;
      if (x > y) return std::weak_ordering::greater;
      return std::weak_ordering::equivalent;
    }
    default: {
      int c = render_cell(a).compare(render_cell(b));
      return c < 0 ? std::weak_ordering::less
                   : (c > 0 ? std::weak_ordering::greater
                            : std::weak_ordering::equivalent);
    }
  }
}

nlohmann::ordered_json cell_to_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double d) const {
      if (std::abs(d) < 1e15 && d == std::trunc(d)) {
        return static_cast<long long>(d);
      }
      return d;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(const ImageRef& r) const { return r.path; }
    nlohmann::ordered_json operator()(const TextRef& r) const { return r.path; }
  };
  return std::visit(Visitor{}, cell);
}

Relation::Relation(std::vector<Column> schema) : schema_(std::move(schema)) {
  std::set<std::string> seen;
  for (const auto& c : schema_) {
    if (c.name.empty()) fail(ErrorKind::kInvalidArgument, "empty column name");
    if (!seen.insert(c.name).second) {
      fail(ErrorKind::kInvalidArgument, "duplicate column '" + c.name + "'");
    }
  }
}

Relation::Relation(std::vector<Column> schema, std::vector<Row> rows)
    : Relation(std::move(schema)) {
  rows_.reserve(rows.size());
  for (auto& r : rows) add_row(std::move(r));
}

std::optional<std::size_t> Relation::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].name == name) return i;
  }
  return std::nullopt;
}

void Relation::add_row(Row row) {
  if (row.size() != schema_.size()) {
    fail(ErrorKind::kInternal, "row arity " + std::to_string(row.size()) +
                                   " does not match schema arity " +
                                   std::to_string(schema_.size()));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!cell_matches(row[i], schema_[i].type)) {
      fail(ErrorKind::kInternal, "cell '" + render_cell(row[i]) +
                                     "' does not match column " +
                                     schema_[i].name + ": " +
                                     to_string(schema_[i].type));
    }
  }
  rows_.push_back(std::move(row));
}

Relation Relation::with_column(Column column,
                               std::vector<Cell> values) const {
  if (values.size() != rows_.size()) {
    fail(ErrorKind::kInternal, "column length mismatch");
  }
  auto schema = schema_;
  schema.push_back(std::move(column));
  Relation out(std::move(schema));
  out.rows_.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Row r = rows_[i];
    r.push_back(std::move(values[i]));
    out.add_row(std::move(r));
  }
  return out;
}

Relation Relation::project(const std::vector<std::string>& columns) const {
  std::vector<std::size_t> idx;
  std::vector<Column> schema;
  for (const auto& name : columns) {
    auto i = find_column(name);
    if (!i) fail(ErrorKind::kBinding, "unknown column '" + name + "'");
    idx.push_back(*i);
    schema.push_back(schema_[*i]);
  }
  Relation out(std::move(schema));
  for (const auto& r : rows_) {
    Row nr;
    nr.reserve(idx.size());
    for (auto i : idx) nr.push_back(r[i]);
    out.rows_.push_back(std::move(nr));
  }
  return out;
}

std::string Relation::schema_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (i) s += ", ";
    s += schema_[i].name + ": " + to_string(schema_[i].type);
  }
  return s + ")";
}

}  // namespace lakeq
