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

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace lakeq {

// Column types of a relation. Catalog descriptors only ever use TEXT, NUMBER,
// IMAGE and DOCUMENT; BOOLEAN shows up in intermediate SQL results.
enum class ColumnType { kText, kNumber, kBoolean, kImage, kDocument };

const char* to_string(ColumnType type);
std::optional<ColumnType> parse_column_type(std::string_view text);

struct ImageRef {
  std::string path;
  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

// Reference to a document. The text itself is loaded on demand through the
// catalog; relations only carry the locator.
struct TextRef {
  std::string path;
  friend bool operator==(const TextRef&, const TextRef&) = default;
};

using Cell =
    std::variant<std::monostate, double, std::string, bool, ImageRef, TextRef>;

inline bool is_null(const Cell& c) {
  return std::holds_alternative<std::monostate>(c);
}

bool cell_matches(const Cell& cell, ColumnType type);

// Renders integral values without a fractional part ("16", not "16.0") and
// everything else with the shortest round-tripping representation.
std::string format_number(double value);

// Plain rendering: text verbatim, numbers via format_number, refs as their
// path, booleans as true/false, null as NULL.
std::string render_cell(const Cell& cell);

// Rendering used in prompts and summaries: text and refs are double quoted.
std::string quote_cell(const Cell& cell);

// Total order used for GROUP BY keys, ORDER BY and plot sorting:
// NULL < booleans/numbers < text < image refs < document refs.
std::weak_ordering compare_cells(const Cell& a, const Cell& b);

nlohmann::ordered_json cell_to_json(const Cell& cell);

struct Column {
  std::string name;
  ColumnType type = ColumnType::kText;
  friend bool operator==(const Column&, const Column&) = default;
};

using Row = std::vector<Cell>;

// In-memory typed table, the value passed between operators.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::vector<Column> schema);
  Relation(std::vector<Column> schema, std::vector<Row> rows);

  const std::vector<Column>& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t arity() const { return schema_.size(); }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  const Column& column(std::size_t i) const { return schema_.at(i); }

  void add_row(Row row);

  // Same rows, schema extended by one column whose values are supplied.
  Relation with_column(Column column, std::vector<Cell> values) const;
  Relation project(const std::vector<std::string>& columns) const;

  std::string schema_string() const;  // "(a: TEXT, b: NUMBER)"

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::vector<Column> schema_;
  std::vector<Row> rows_;
};

}  // namespace lakeq
