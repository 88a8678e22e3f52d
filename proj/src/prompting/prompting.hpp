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
#include <string>
#include <string_view>
#include <vector>

#include "catalog/catalog.hpp"
#include "common/environment.hpp"
#include "llm/llm.hpp"
#include "plan/plan.hpp"

namespace lakeq::prompting {

// Template assets compiled in from prompts/. Every file starts with a
// "## name vN" line that is dropped when rendering.
std::string_view asset(std::string_view name);
std::vector<std::string> asset_names();
std::string template_hash(std::string_view name);  // 12 hex chars

// Replaces {{key}} placeholders; a placeholder without a value is an
// Error(kInternal).
std::string render(std::string_view name, const std::map<std::string, std::string>& vars);

struct Prompt {
  std::vector<ChatMessage> messages;
  std::string template_hash;  // combined hash of the templates used

  ChatRequest request(Phase tag, int max_tokens = 1024) const;
};

// Appends the model's previous answer and a corrective user message.
Prompt with_reprompt(Prompt prompt, const std::string& previous_response,
                     std::string_view reprompt_template,
                     const std::map<std::string, std::string>& vars = {});

struct FewShotExample {
  std::string domain;
  std::string query;
  std::string plan;
};

std::vector<FewShotExample> default_fewshot();

struct OperatorSummary {
  std::string name;
  std::string description;
  std::string arg_schema;
};

std::vector<OperatorSummary> operator_summaries(const OperatorSet& ops);
std::vector<std::string> capabilities(const OperatorSet& ops);

// Error text plus the distilled analysis that go back into a retried prompt.
struct Feedback {
  std::string error;
  std::string hints;
};

std::string describe_dataset(const DatasetDescriptor& d);

Prompt build_planning_prompt(std::string_view query,
                             const std::vector<DatasetDescriptor>& descriptors,
                             const std::vector<std::string>& capabilities,
                             const std::vector<FewShotExample>& fewshot,
                             const std::optional<Feedback>& feedback = std::nullopt);

Prompt build_mapping_prompt(const LogicalPlan& plan, const LogicalStep& step,
                            const std::vector<OperatorSummary>& operators,
                            std::string_view env_summary,
                            const std::vector<PhysicalStep>& history,
                            const std::optional<Feedback>& feedback = std::nullopt);

// `plan` may be null when planning itself failed.
Prompt build_error_prompt(const ErrorReport& error, std::string_view query,
                          const LogicalPlan* plan,
                          const std::vector<PhysicalStep>& history);

Prompt build_udf_prompt(std::string_view description, const Relation& input,
                        std::string_view out_column,
                        const std::optional<std::string>& feedback = std::nullopt);

Prompt build_prune_prompt(std::string_view query, const DatasetDescriptor& d);

inline constexpr std::size_t kValueBudget = 5;
inline constexpr std::size_t kRelationBudget = 5;

// Schema line, then per column its first `budget` distinct values.
std::string summarize_relation(const Relation& relation, std::size_t budget = kValueBudget);

// The most recently added `max_relations` relations of env, oldest first.
std::string summarize_environment(const Environment& env, std::size_t budget = kValueBudget,
                                  std::size_t max_relations = kRelationBudget);

}  // namespace lakeq::prompting
