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

#include "prompting/prompting.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "udf/expr.hpp"

namespace lakeq::prompting {

namespace detail {
struct AssetEntry {
  const char* name;
  std::string_view text;
};
extern const AssetEntry kAssets[];
extern const std::size_t kAssetCount;
}  // namespace detail

std::string_view asset(std::string_view name) {
  for (std::size_t i = 0; i < detail::kAssetCount; ++i) {
    if (detail::kAssets[i].name == name) return detail::kAssets[i].text;
  }
  fail(ErrorKind::kInternal, "no prompt asset named '" + std::string(name) + "'");
}

std::vector<std::string> asset_names() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < detail::kAssetCount; ++i) out.emplace_back(detail::kAssets[i].name);
  std::sort(out.begin(), out.end());
  return out;
}

std::string template_hash(std::string_view name) { return sha256_hex(asset(name)).substr(0, 12); }

std::string render(std::string_view name, const std::map<std::string, std::string>& vars) {
  std::string_view text = asset(name);
  if (text.rfind("##", 0) == 0) {
    auto nl = text.find('\n');
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
  }
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    std::string key(text.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it == vars.end()) {
      fail(ErrorKind::kInternal, "template '" + std::string(name) + "' needs a value for {{" + key + "}}");
    }
    out += it->second;
    pos = close + 2;
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  return out;
}

namespace {

std::string combined_hash(std::initializer_list<std::string_view> names) {
  std::string acc;
  for (auto n : names) acc += std::string(n) + ":" + template_hash(n) + ";";
  return sha256_hex(acc).substr(0, 12);
}

std::string indent(std::string_view text, std::string_view pad) {
  std::string out;
  for (const auto& line : split_lines(text)) out += std::string(pad) + line + "\n";
  return out;
}

std::string render_history(const std::vector<PhysicalStep>& history) {
  std::string out;
  for (const auto& s : history) {
    nlohmann::ordered_json args = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.args) args[k] = arg_to_json(v);
    out += "Step " + std::to_string(s.logical_index) + ": " + s.output + " = " + s.op + " " +
           args.dump() + "\n";
  }
  return out;
}

std::string quote_sample(const std::string& sample, ColumnType type) {
  if (type == ColumnType::kNumber || type == ColumnType::kBoolean) return sample;
  return nlohmann::json(sample).dump();
}

}  // namespace

ChatRequest Prompt::request(Phase tag, int max_tokens) const {
  ChatRequest r;
  r.messages = messages;
  r.tag = tag;
  r.temperature = 0.0;
  r.max_tokens = max_tokens;
  r.template_hash = template_hash;
  return r;
}

Prompt with_reprompt(Prompt prompt, const std::string& previous_response,
                     std::string_view reprompt_template,
                     const std::map<std::string, std::string>& vars) {
  prompt.messages.push_back({Role::kAssistant, previous_response});
  prompt.messages.push_back({Role::kUser, render(reprompt_template, vars)});
  prompt.template_hash =
      sha256_hex(prompt.template_hash + ";" + template_hash(reprompt_template)).substr(0, 12);
  return prompt;
}

std::vector<FewShotExample> default_fewshot() {
  auto j = nlohmann::json::parse(asset("fewshot"));
  std::vector<FewShotExample> out;
  for (const auto& e : j) {
    out.push_back({e.at("domain").get<std::string>(), e.at("query").get<std::string>(),
                   e.at("plan").get<std::string>()});
  }
  return out;
}

std::vector<OperatorSummary> operator_summaries(const OperatorSet& ops) {
  std::vector<OperatorSummary> out;
  for (const auto& spec : ops.specs()) {
    std::string schema;
    for (const auto& a : spec.args) {
      std::string kind;
      switch (a.kind) {
        case ArgKind::kString: kind = "text"; break;
        case ArgKind::kStringList: kind = "list of text"; break;
        case ArgKind::kRelation: kind = "relation name"; break;
        case ArgKind::kColumn: {
          kind = "column of " + a.relation_arg;
          if (!a.allowed_types.empty()) {
            std::vector<std::string> types;
            for (auto t : a.allowed_types) types.emplace_back(to_string(t));
            kind += ", type " + join(types, " or ");
          }
          break;
        }
        case ArgKind::kNewColumn: kind = "new column name"; break;
        case ArgKind::kTemplate: kind = "text with {column} placeholders from " + a.relation_arg; break;
        case ArgKind::kChoice: kind = "one of " + join(a.choices, ", "); break;
        case ArgKind::kSql: kind = "SQL SELECT statement"; break;
      }
      schema += "  - " + a.name + " (" + kind + (a.required ? "" : ", optional") + "): " +
                a.description + "\n";
    }
    if (!spec.example.empty()) {
      schema += "  example: {\"operator\": \"" + spec.name + "\", \"args\": " + spec.example + "}\n";
    }
    while (!schema.empty() && schema.back() == '\n') schema.pop_back();
    out.push_back({spec.name, spec.description, schema});
  }
  return out;
}

std::vector<std::string> capabilities(const OperatorSet& ops) {
  std::vector<std::string> out;
  for (const auto& spec : ops.specs()) {
    if (!spec.capability.empty()) out.push_back(spec.capability);
  }
  return out;
}

std::string describe_dataset(const DatasetDescriptor& d) {
  std::string out;
  switch (d.kind) {
    case DatasetKind::kTable:
      out = "Table " + d.name + " (" + std::to_string(d.row_count) + " rows):\n";
      break;
    case DatasetKind::kImageCollection:
      out = "Image collection " + d.name + " (" + std::to_string(d.row_count) +
            " images), as a table:\n";
      break;
    case DatasetKind::kTextCollection:
      out = "Text collection " + d.name + " (" + std::to_string(d.row_count) +
            " documents), as a table:\n";
      break;
  }
  for (const auto& c : d.columns) {
    out += "- " + c.name + ": " + to_string(c.semantic_type);
    if (!c.samples.empty()) {
      std::vector<std::string> quoted;
      for (const auto& s : c.samples) quoted.push_back(quote_sample(s, c.semantic_type));
      out += ", e.g. " + join(quoted, ", ");
    }
    out += "\n";
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

Prompt build_planning_prompt(std::string_view query,
                             const std::vector<DatasetDescriptor>& descriptors,
                             const std::vector<std::string>& caps,
                             const std::vector<FewShotExample>& fewshot,
                             const std::optional<Feedback>& feedback) {
  if (descriptors.empty()) {
    fail(ErrorKind::kInvalidArgument, "planning prompt needs at least one dataset");
  }
  std::string fewshot_text;
  if (!fewshot.empty()) {
    std::string examples;
    for (std::size_t i = 0; i < fewshot.size(); ++i) {
      if (i) examples += "\n";
      examples += "Example " + std::to_string(i + 1) + " (" + fewshot[i].domain + ")\n";
      examples += "Query: " + fewshot[i].query + "\n" + fewshot[i].plan + "\n";
    }
    fewshot_text = render("fewshot_block", {{"examples", examples}}) + "\n\n";
  }
  std::vector<std::string> data;
  for (const auto& d : descriptors) data.push_back(describe_dataset(d));
  std::string cap_text;
  for (const auto& c : caps) cap_text += "- " + c + "\n";
  while (!cap_text.empty() && cap_text.back() == '\n') cap_text.pop_back();

  std::string feedback_text;
  if (feedback) {
    feedback_text = render("planning_feedback", {{"error", feedback->error}, {"hints", feedback->hints}}) + "\n\n";
  }
  Prompt p;
  p.messages.push_back({Role::kSystem, render("planning_system", {{"fewshot", fewshot_text},
                                                                  {"data", join(data, "\n\n")},
                                                                  {"capabilities", cap_text}})});
  p.messages.push_back({Role::kUser, render("planning_user", {{"query", std::string(query)},
                                                              {"feedback", feedback_text}})});
  p.template_hash = feedback ? combined_hash({"planning_system", "planning_user", "fewshot_block",
                                              "planning_feedback"})
                             : combined_hash({"planning_system", "planning_user", "fewshot_block"});
  return p;
}

Prompt build_mapping_prompt(const LogicalPlan& plan, const LogicalStep& step,
                            const std::vector<OperatorSummary>& operators,
                            std::string_view env_summary,
                            const std::vector<PhysicalStep>& history,
                            const std::optional<Feedback>& feedback) {
  std::string ops_text;
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (i) ops_text += "\n\n";
    ops_text += operators[i].name + ": " + operators[i].description + "\n" + operators[i].arg_schema;
  }
  std::string history_text;
  if (!history.empty()) {
    history_text = render("mapping_history", {{"steps", render_history(history)}}) + "\n\n";
  }
  std::string feedback_text;
  if (feedback) {
    feedback_text = "\n" + render("mapping_feedback", {{"error", feedback->error}, {"hints", feedback->hints}}) + "\n\n";
  } else {
    feedback_text = "\n";
  }
  Prompt p;
  p.messages.push_back({Role::kSystem, render("mapping_system", {{"operators", ops_text}})});
  p.messages.push_back(
      {Role::kUser, render("mapping_user", {{"query", plan.query},
                                            {"plan", render_logical_plan(plan)},
                                            {"history", history_text},
                                            {"relations", std::string(env_summary)},
                                            {"feedback", feedback_text},
                                            {"step_index", std::to_string(step.index)},
                                            {"step", step.description}})});
  p.template_hash =
      feedback ? combined_hash({"mapping_system", "mapping_user", "mapping_history", "mapping_feedback"})
               : combined_hash({"mapping_system", "mapping_user", "mapping_history"});
  return p;
}

Prompt build_error_prompt(const ErrorReport& error, std::string_view query, const LogicalPlan* plan,
                          const std::vector<PhysicalStep>& history) {
  std::string plan_text;
  if (plan) {
    for (const auto& s : plan->steps) {
      plan_text += "Step " + std::to_string(s.index) + ": " + s.description;
      if (s.index == error.step_index && error.phase != ErrorPhase::kPlanning) {
        plan_text += "   <-- FAILED HERE";
      }
      plan_text += "\n";
    }
  } else {
    plan_text = "(no plan could be parsed)\n";
  }
  std::string history_text;
  if (!history.empty()) {
    history_text = render("mapping_history", {{"steps", render_history(history)}}) + "\n\n";
  }
  std::string failing;
  if (error.step_index > 0 && error.phase != ErrorPhase::kPlanning) {
    failing = " of step " + std::to_string(error.step_index);
    if (!error.op.empty()) failing += " (operator " + error.op + ")";
  }
  Prompt p;
  p.messages.push_back({Role::kSystem, render("error_system", {})});
  p.messages.push_back({Role::kUser, render("error_user", {{"query", std::string(query)},
                                                           {"plan", plan_text},
                                                           {"history", history_text},
                                                           {"phase", to_string(error.phase)},
                                                           {"failing", failing},
                                                           {"error", error.message}})});
  p.template_hash = combined_hash({"error_system", "error_user", "mapping_history"});
  return p;
}

Prompt build_udf_prompt(std::string_view description, const Relation& input,
                        std::string_view out_column, const std::optional<std::string>& feedback) {
  std::string builtins;
  for (const auto& sig : udf::builtin_signatures()) builtins += "- " + sig + "\n";
  std::string samples;
  for (std::size_t r = 0; r < input.size() && r < 3; ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < input.arity(); ++c) row[input.column(c).name] = cell_to_json(input.rows()[r][c]);
    samples += row.dump() + "\n";
  }
  if (samples.empty()) samples = "(no rows)\n";
  std::string feedback_text;
  if (feedback) feedback_text = render("udf_feedback", {{"error", *feedback}});
  Prompt p;
  p.messages.push_back({Role::kSystem, render("udf_system", {{"reference", render("udf_reference", {{"builtins", builtins}})}})});
  p.messages.push_back({Role::kUser, render("udf_user", {{"schema", input.schema_string()},
                                                         {"samples", samples},
                                                         {"out_column", std::string(out_column)},
                                                         {"description", std::string(description)},
                                                         {"feedback", feedback_text}})});
  p.template_hash = feedback ? combined_hash({"udf_system", "udf_reference", "udf_user", "udf_feedback"})
                             : combined_hash({"udf_system", "udf_reference", "udf_user"});
  return p;
}

Prompt build_prune_prompt(std::string_view query, const DatasetDescriptor& d) {
  Prompt p;
  p.messages.push_back({Role::kSystem, render("prune_system", {})});
  p.messages.push_back({Role::kUser, render("prune_user", {{"query", std::string(query)},
                                                           {"dataset", describe_dataset(d)}})});
  p.template_hash = combined_hash({"prune_system", "prune_user"});
  return p;
}

std::string summarize_relation(const Relation& relation, std::size_t budget) {
  std::string out = relation.schema_string();
  if (relation.empty()) return out + "\n(no rows)";
  for (std::size_t c = 0; c < relation.arity(); ++c) {
    std::vector<std::string> values;
    std::set<std::string> seen;
    for (const auto& row : relation.rows()) {
      auto q = quote_cell(row[c]);
      if (seen.insert(q).second) values.push_back(std::move(q));
    }
    std::size_t total = values.size();
    if (total > budget) {
      values.resize(budget);
      values.push_back("… (" + std::to_string(total - budget) + " more)");
    }
    out += "\n" + relation.column(c).name + ": {" + join(values, ",") + "}";
  }
  return out;
}

std::string summarize_environment(const Environment& env, std::size_t budget,
                                  std::size_t max_relations) {
  const auto& names = env.names();
  std::size_t first = names.size() > max_relations ? names.size() - max_relations : 0;
  std::string out;
  if (first > 0) {
    std::vector<std::string> omitted(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(first));
    out += "(" + std::to_string(first) + " older relations not shown: " + join(omitted, ", ") + ")\n\n";
  }
  for (std::size_t i = first; i < names.size(); ++i) {
    const Relation* rel = env.find(names[i]);
    out += "Relation " + names[i] + " (" + std::to_string(rel->size()) + " rows):\n";
    out += indent(summarize_relation(*rel, budget), "  ");
    if (i + 1 < names.size()) out += "\n";
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

}  // namespace lakeq::prompting
