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

#include "common/error.hpp"
#include "common/text.hpp"
#include "plan/plan.hpp"
#include "sql/sql.hpp"

namespace lakeq {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kUnknownOperator: return "unknown operator";
    case ViolationKind::kUnknownRelation: return "unknown relation";
    case ViolationKind::kUnknownColumn: return "unknown column";
    case ViolationKind::kArgSchema: return "argument schema";
    case ViolationKind::kType: return "type";
    case ViolationKind::kSecurity: return "security";
  }
  return "argument schema";
}

std::string Validation::message() const {
  std::vector<std::string> lines;
  for (const auto& v : violations) lines.push_back(v.message);
  return join(lines, "\n");
}

namespace {

std::string column_list(const Relation& rel) {
  std::vector<std::string> names;
  for (const auto& c : rel.schema()) names.push_back(c.name);
  return join(names, ", ");
}

std::string type_list(const std::set<ColumnType>& types) {
  std::vector<std::string> names;
  for (auto t : types) names.push_back(to_string(t));
  return join(names, " or ");
}

}  // namespace

Validation validate_step(PhysicalStep& step, const Environment& env, const OperatorSet& ops) {
  Validation v;
  auto add = [&](ViolationKind kind, std::string msg) { v.violations.push_back({kind, std::move(msg)}); };
  step.inputs.clear();

  const OperatorSpec* spec = ops.find(step.op);
  if (!spec) {
    std::vector<std::string> names;
    for (const auto& s : ops.specs()) names.push_back(s.name);
    add(ViolationKind::kUnknownOperator,
        "unknown operator '" + step.op + "' (available: " + join(names, ", ") + ")");
    return v;
  }

  for (const auto& [name, _] : step.args) {
    bool known = std::any_of(spec->args.begin(), spec->args.end(),
                             [&](const ArgSpec& a) { return a.name == name; });
    if (!known) add(ViolationKind::kArgSchema, "unexpected argument '" + name + "' for operator " + spec->name);
  }

  auto text_arg = [&](const std::string& name) -> const std::string* {
    auto it = step.args.find(name);
    if (it == step.args.end()) return nullptr;
    return std::get_if<std::string>(&it->second);
  };
  auto relation_of = [&](const ArgSpec& a) -> const Relation* {
    const auto* rel_name = text_arg(a.relation_arg);
    return rel_name ? env.find(*rel_name) : nullptr;
  };

  for (const auto& a : spec->args) {
    auto it = step.args.find(a.name);
    if (it == step.args.end()) {
      if (a.required) add(ViolationKind::kArgSchema, "missing argument '" + a.name + "' for operator " + spec->name);
      continue;
    }
    if (a.kind == ArgKind::kStringList) {
      if (!std::holds_alternative<std::vector<std::string>>(it->second)) {
        add(ViolationKind::kArgSchema, "argument '" + a.name + "' of " + spec->name + " must be a list of strings");
      }
      continue;
    }
    const auto* value = std::get_if<std::string>(&it->second);
    if (!value) {
      add(ViolationKind::kArgSchema, "argument '" + a.name + "' of " + spec->name + " must be a single string");
      continue;
    }
    if (trim(*value).empty()) {
      add(ViolationKind::kArgSchema, "argument '" + a.name + "' of " + spec->name + " is empty");
      continue;
    }
    switch (a.kind) {
      case ArgKind::kString:
      case ArgKind::kStringList:
        break;
      case ArgKind::kRelation: {
        if (!env.contains(*value)) {
          add(ViolationKind::kUnknownRelation,
              "unknown relation '" + *value + "' (available: " + join(env.names(), ", ") + ")");
        } else if (std::find(step.inputs.begin(), step.inputs.end(), *value) == step.inputs.end()) {
          step.inputs.push_back(*value);
        }
        break;
      }
      case ArgKind::kColumn: {
        const Relation* rel = relation_of(a);
        if (!rel) break;  // reported for the relation argument
        auto idx = rel->find_column(*value);
        const auto& rel_name = *text_arg(a.relation_arg);
        if (!idx) {
          add(ViolationKind::kUnknownColumn, "unknown column '" + *value + "' in relation " + rel_name +
                                                 " (columns: " + column_list(*rel) + ")");
        } else if (!a.allowed_types.empty() && !a.allowed_types.count(rel->column(*idx).type)) {
          add(ViolationKind::kType, "column '" + *value + "' of relation " + rel_name + " has type " +
                                        to_string(rel->column(*idx).type) + " but " + spec->name +
                                        " argument '" + a.name + "' needs " + type_list(a.allowed_types));
        }
        break;
      }
      case ArgKind::kNewColumn: {
        const Relation* rel = relation_of(a);
        if (rel && rel->find_column(*value)) {
          add(ViolationKind::kArgSchema, "column '" + *value + "' already exists in relation " +
                                             *text_arg(a.relation_arg) + "; choose a new name for '" +
                                             a.name + "'");
        }
        break;
      }
      case ArgKind::kTemplate: {
        const Relation* rel = relation_of(a);
        if (!rel) break;
        for (const auto& ph : template_placeholders(*value)) {
          if (!rel->find_column(ph)) {
            add(ViolationKind::kUnknownColumn, "placeholder {" + ph + "} in '" + a.name +
                                                   "' does not name a column of relation " +
                                                   *text_arg(a.relation_arg) + " (columns: " +
                                                   column_list(*rel) + ")");
          }
        }
        break;
      }
      case ArgKind::kChoice: {
        if (std::find(a.choices.begin(), a.choices.end(), *value) == a.choices.end()) {
          add(ViolationKind::kArgSchema, "argument '" + a.name + "' of " + spec->name + " must be one of " +
                                             join(a.choices, ", ") + ", got '" + *value + "'");
        }
        break;
      }
      case ArgKind::kSql: {
        try {
          auto stmt = sql::parse_select(*value);
          for (const auto& t : sql::referenced_tables(stmt)) {
            if (env.contains(t) && std::find(step.inputs.begin(), step.inputs.end(), t) == step.inputs.end()) {
              step.inputs.push_back(t);
            }
          }
          sql::check_sql(*value, env);
        } catch (const Error& e) {
          std::string msg = e.what();
          switch (e.kind()) {
            case ErrorKind::kSecurity: add(ViolationKind::kSecurity, msg); break;
            case ErrorKind::kType: add(ViolationKind::kType, msg); break;
            case ErrorKind::kBinding:
              add(msg.rfind("unknown relation", 0) == 0 ? ViolationKind::kUnknownRelation
                                                        : ViolationKind::kUnknownColumn,
                  msg);
              break;
            default: add(ViolationKind::kArgSchema, "invalid SQL: " + msg); break;
          }
        }
        break;
      }
    }
  }
  return v;
}

}  // namespace lakeq
