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

#include "plan/plan.hpp"

#include <algorithm>
#include <regex>

#include "common/error.hpp"
#include "common/text.hpp"

namespace lakeq {

namespace {

bool mentions(std::string_view text_lower, const std::string& name) {
  auto n = to_lower(name);
  auto spaced = n;
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  for (const auto& needle : {n, spaced}) {
    std::size_t pos = 0;
    while ((pos = text_lower.find(needle, pos)) != std::string_view::npos) {
      bool left = pos == 0 || !is_word(text_lower[pos - 1]);
      auto end = pos + needle.size();
      bool right = end >= text_lower.size() || !is_word(text_lower[end]);
      if (left && right) return true;
      ++pos;
    }
  }
  return false;
}

}  // namespace

LogicalPlan parse_logical_plan(std::string_view response,
                               const std::vector<std::string>& dataset_names) {
  static const std::regex kStep(
      R"(^\s*(?:[-*#>]+\s*)?(?:\*\*)?step\s*(\d+)\s*(?:\*\*)?\s*[:.)\-]\s*(?:\*\*)?\s*(.*?)\s*$)",
      std::regex::icase);
  LogicalPlan plan;
  for (const auto& line : split_lines(response)) {
    std::smatch m;
    if (!std::regex_match(line, m, kStep)) continue;
    std::string desc = m[2].str();
    if (desc.empty()) continue;
    LogicalStep step;
    step.index = plan.steps.size() + 1;
    step.description = desc;
    auto lower = to_lower(desc);
    for (const auto& d : dataset_names) {
      if (mentions(lower, d)) step.referenced_datasets.push_back(d);
    }
    plan.steps.push_back(std::move(step));
  }
  if (plan.steps.empty()) {
    fail(ErrorKind::kParse,
         "could not find any 'Step <i>: <description>' lines in the planning response:\n" +
             std::string(response));
  }
  return plan;
}

std::string render_logical_plan(const LogicalPlan& plan) {
  std::string out;
  for (const auto& s : plan.steps) {
    out += "Step " + std::to_string(s.index) + ": " + s.description + "\n";
  }
  return out;
}

std::string render_arg(const ArgValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return join(std::get<std::vector<std::string>>(value), ", ");
}

nlohmann::ordered_json arg_to_json(const ArgValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return std::get<std::vector<std::string>>(value);
}

OperatorChoice parse_operator_choice(std::string_view response) {
  std::optional<nlohmann::json> obj;
  for (const auto& block : fenced_blocks(response)) {
    try {
      auto j = nlohmann::json::parse(block.body);
      if (j.is_object()) {
        obj = std::move(j);
        break;
      }
    } catch (const nlohmann::json::exception&) {
    }
  }
  if (!obj) {
    try {
      auto j = nlohmann::json::parse(trim(response));
      if (j.is_object()) obj = std::move(j);
    } catch (const nlohmann::json::exception&) {
    }
  }
  if (!obj) {
    fail(ErrorKind::kParse,
         "the operator choice must be a JSON object {\"operator\": ..., \"args\": {...}} in a "
         "fenced block; none was found in:\n" + std::string(response));
  }
  const auto& j = *obj;
  if (!j.contains("operator")) fail(ErrorKind::kParse, "operator choice is missing field 'operator'");
  if (!j["operator"].is_string()) fail(ErrorKind::kParse, "field 'operator' must be a string");
  if (!j.contains("args")) fail(ErrorKind::kParse, "operator choice is missing field 'args'");
  if (!j["args"].is_object()) fail(ErrorKind::kParse, "field 'args' must be an object");
  OperatorChoice choice;
  choice.op = trim(j["operator"].get<std::string>());
  auto scalar = [](const nlohmann::json& v, const std::string& key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    fail(ErrorKind::kParse, "argument '" + key + "' must be a string or a list of strings");
  };
  for (auto it = j["args"].begin(); it != j["args"].end(); ++it) {
    if (it.value().is_array()) {
      std::vector<std::string> items;
      for (const auto& v : it.value()) items.push_back(scalar(v, it.key()));
      choice.args[it.key()] = std::move(items);
    } else {
      choice.args[it.key()] = scalar(it.value(), it.key());
    }
  }
  return choice;
}

OperatorSet::OperatorSet(std::vector<OperatorSpec> specs) : specs_(std::move(specs)) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (specs_[i].name == specs_[k].name) {
        fail(ErrorKind::kInternal, "operator '" + specs_[i].name + "' registered twice");
      }
    }
  }
}

const OperatorSpec* OperatorSet::find(std::string_view name) const {
  for (const auto& s : specs_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string_view::npos) {
    auto end = tmpl.find('}', pos + 1);
    if (end == std::string_view::npos) break;
    std::string name(trim(tmpl.substr(pos + 1, end - pos - 1)));
    if (!name.empty() && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    pos = end + 1;
  }
  return out;
}

std::string render_physical_plan(const std::vector<PhysicalStep>& steps) {
  std::map<std::string, std::size_t> producer;
  std::set<std::size_t> consumed;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (const auto& in : steps[i].inputs) {
      auto it = producer.find(in);
      if (it != producer.end()) consumed.insert(it->second);
    }
    producer[steps[i].output] = i;
  }
  std::string out;
  auto render = [&](auto& self, std::size_t i, int depth) -> void {
    const auto& s = steps[i];
    std::string line(static_cast<std::size_t>(depth) * 2, ' ');
    line += s.output + " = " + s.op + "(";
    bool first = true;
    for (const auto& [k, v] : s.args) {
      if (!first) line += ", ";
      first = false;
      line += k + "=" + arg_to_json(v).dump();
    }
    line += ")";
    out += line + "\n";
    for (const auto& in : s.inputs) {
      auto it = producer.find(in);
      if (it != producer.end() && it->second < i) {
        self(self, it->second, depth + 1);
      } else {
        out += std::string(static_cast<std::size_t>(depth + 1) * 2, ' ') + in + "\n";
      }
    }
  };
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!consumed.count(i)) render(render, i, 0);
  }
  return out;
}

nlohmann::ordered_json step_to_json(const PhysicalStep& step) {
  nlohmann::ordered_json j;
  j["logical_step"] = step.logical_index;
  j["operator"] = step.op;
  auto& args = j["args"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : step.args) args[k] = arg_to_json(v);
  j["inputs"] = step.inputs;
  j["output"] = step.output;
  return j;
}

const char* to_string(ErrorPhase phase) {
  switch (phase) {
    case ErrorPhase::kPlanning: return "planning";
    case ErrorPhase::kMapping: return "mapping";
    case ErrorPhase::kExecution: return "execution";
  }
  return "execution";
}

}  // namespace lakeq
