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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catalog/catalog.hpp"
#include "common/environment.hpp"
#include "common/value.hpp"
#include "json.hpp"
#include "llm/llm.hpp"
#include "plan/plan.hpp"

namespace lakeq {

// Answers a question about one image or document, identified by its
// reference path relative to the catalog root.
class QaBackend {
 public:
  virtual ~QaBackend() = default;
  virtual std::string answer(const std::string& item_ref, const std::string& question) = 0;
};

// Looks answers up in the annotations.json files of the catalog's
// collections: {"<file name>": {"<question>": "<answer>"}}. Questions match
// ignoring case, surrounding space and trailing punctuation. Anything not
// annotated answers "unknown".
class FixtureQaBackend : public QaBackend {
 public:
  explicit FixtureQaBackend(const Catalog& catalog);
  std::string answer(const std::string& item_ref, const std::string& question) override;
  std::size_t annotated_items() const { return answers_.size(); }

  static std::string normalize_question(std::string_view question);

 private:
  std::map<std::string, std::map<std::string, std::string>> answers_;
};

// POSTs {"item_uri", "question"} to an external service and reads {"answer"}.
class HttpQaBackend : public QaBackend {
 public:
  HttpQaBackend(std::string url, std::filesystem::path catalog_root);
  std::string answer(const std::string& item_ref, const std::string& question) override;

 private:
  std::string url_;
  std::filesystem::path root_;
};

inline constexpr const char* kUnknownAnswer = "unknown";

struct PlotSpec {
  std::string kind;  // bar | line | scatter
  std::string x;
  std::string y;
  std::string title;
  std::vector<std::pair<Cell, Cell>> data;  // sorted by x
  friend bool operator==(const PlotSpec&, const PlotSpec&) = default;
};

nlohmann::ordered_json plot_to_json(const PlotSpec& plot);
std::string render_svg(const PlotSpec& plot);

// Individual operators. Binding problems raise Error(kBinding).
Relation visual_qa(const Relation& input, std::string_view image_column,
                   std::string_view question, std::string_view out_column, QaBackend& qa);
Relation text_qa(const Relation& input, std::string_view text_column,
                 std::string_view question_template, std::string_view out_column, QaBackend& qa);
Relation image_select(const Relation& input, std::string_view image_column,
                      std::string_view description, QaBackend& qa);
std::string image_select_question(std::string_view description);

// Fills every {column} placeholder from the row.
std::string instantiate_template(std::string_view tmpl, const Relation& input, const Row& row);

struct UdfResult {
  Relation relation;
  std::string expression;  // the expression that was evaluated
  std::size_t attempts = 0;
};

// Asks the model for a row expression, with one reprompt on a parse or type
// error; Error(kOperator) when the second answer is unusable too.
UdfResult udf_transform(const Relation& input, std::string_view description,
                        std::string_view out_column, ChatClient& llm);

PlotSpec make_plot(const Relation& input, std::string_view kind, std::string_view x,
                   std::string_view y, std::string_view title);

// The operator set every query runs against.
const OperatorSet& default_operators();

struct OperatorContext {
  const Catalog* catalog = nullptr;
  QaBackend* qa = nullptr;
  ChatClient* llm = nullptr;
};

struct OperatorOutput {
  Relation relation;              // plots also yield their (x, y) data
  std::optional<PlotSpec> plot;
  std::optional<std::string> udf_expression;
};

// Runs a validated step against env.
OperatorOutput execute_operator(const PhysicalStep& step, const Environment& env,
                                OperatorContext& ctx);

}  // namespace lakeq
