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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "common/environment.hpp"
#include "common/value.hpp"
#include "json.hpp"

namespace lakeq {

struct LogicalStep {
  std::size_t index = 0;  // 1-based
  std::string description;
  std::vector<std::string> referenced_datasets;
  friend bool operator==(const LogicalStep&, const LogicalStep&) = default;
};

struct LogicalPlan {
  std::string query;
  std::vector<LogicalStep> steps;
  friend bool operator==(const LogicalPlan&, const LogicalPlan&) = default;
};

// Collects "Step <i>: <text>" lines, case-insensitively, ignoring any
// surrounding prose or fences, and renumbers them 1..n. Mentions of the
// given dataset names fill referenced_datasets. Zero steps → Error(kParse)
// whose message carries the raw response.
LogicalPlan parse_logical_plan(std::string_view response,
                               const std::vector<std::string>& dataset_names = {});

// "Step 1: ...\nStep 2: ...\n"
std::string render_logical_plan(const LogicalPlan& plan);

using ArgValue = std::variant<std::string, std::vector<std::string>>;
using ArgMap = std::map<std::string, ArgValue>;

std::string render_arg(const ArgValue& value);
nlohmann::ordered_json arg_to_json(const ArgValue& value);

struct OperatorChoice {
  std::string op;
  ArgMap args;
  friend bool operator==(const OperatorChoice&, const OperatorChoice&) = default;
};

// First fenced block holding a JSON object {"operator": str, "args": obj}.
// Numbers and booleans among the args are kept as their JSON text.
OperatorChoice parse_operator_choice(std::string_view response);

struct PhysicalStep {
  std::size_t logical_index = 0;  // which logical step it implements
  std::string op;
  ArgMap args;
  std::vector<std::string> inputs;
  std::string output;
  friend bool operator==(const PhysicalStep&, const PhysicalStep&) = default;
};

// Argument schema shared by validation, prompts and the operator registry.
enum class ArgKind {
  kString,
  kStringList,
  kRelation,   // name of a live relation
  kColumn,     // column of the relation named by `relation_arg`
  kNewColumn,  // fresh column name for the output
  kTemplate,   // text whose {placeholders} name columns of `relation_arg`
  kChoice,     // one of `choices`
  kSql,        // SELECT statement over live relations
};

struct ArgSpec {
  std::string name;
  ArgKind kind = ArgKind::kString;
  std::string description;
  bool required = true;
  std::string relation_arg = "input";
  std::set<ColumnType> allowed_types;  // kColumn; empty = any
  std::vector<std::string> choices;    // kChoice
};

enum class OutputKind { kRelation, kPlot };

struct OperatorSpec {
  std::string name;
  std::string description;  // shown in mapping prompts
  std::string capability;   // shown in planning prompts
  std::vector<ArgSpec> args;
  OutputKind output = OutputKind::kRelation;
  std::string example;      // a JSON args object used in the prompt
};

class OperatorSet {
 public:
  OperatorSet() = default;
  explicit OperatorSet(std::vector<OperatorSpec> specs);
  const std::vector<OperatorSpec>& specs() const { return specs_; }
  const OperatorSpec* find(std::string_view name) const;

 private:
  std::vector<OperatorSpec> specs_;
};

// Placeholder names in a question template, in order, without duplicates.
std::vector<std::string> template_placeholders(std::string_view tmpl);

enum class ViolationKind {
  kUnknownOperator,
  kUnknownRelation,
  kUnknownColumn,
  kArgSchema,
  kType,
  kSecurity,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct Validation {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string message() const;  // one violation per line
};

// Fills step.inputs from the relation-valued args (or the tables an SQL
// query mentions) and checks the step against env and the operator set.
Validation validate_step(PhysicalStep& step, const Environment& env, const OperatorSet& ops);

// Indented operator tree rooted at the last step; base relations are leaves.
std::string render_physical_plan(const std::vector<PhysicalStep>& steps);

nlohmann::ordered_json step_to_json(const PhysicalStep& step);

enum class ErrorPhase { kPlanning, kMapping, kExecution };

const char* to_string(ErrorPhase phase);

struct ErrorReport {
  ErrorPhase phase = ErrorPhase::kExecution;
  std::size_t step_index = 0;  // 0 when no step is involved (planning)
  std::string message;         // verbatim
  std::string op;              // operator, if one was chosen
};

}  // namespace lakeq
