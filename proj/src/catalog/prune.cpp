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
#include <optional>
#include <set>

#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "common/log.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "llm/llm.hpp"
#include "prompting/prompting.hpp"

namespace lakeq {

namespace {

// Names listed in the first fenced block: a JSON array, or one per line
// with optional bullets. nullopt when there is no fenced block at all.
std::optional<std::vector<std::string>> fenced_names(std::string_view response) {
  auto blocks = fenced_blocks(response);
  if (blocks.empty()) return std::nullopt;
  const auto& body = blocks.front().body;
  std::vector<std::string> names;
  try {
    auto j = nlohmann::json::parse(body);
    if (j.is_array()) {
      for (const auto& v : j) {
        if (v.is_string()) names.push_back(v.get<std::string>());
      }
      return names;
    }
  } catch (const nlohmann::json::exception&) {
  }
  for (const auto& raw : split_lines(body)) {
    std::string_view line = trim(raw);
    while (!line.empty() && (line.front() == '-' || line.front() == '*' || line.front() == ' ')) {
      line.remove_prefix(1);
    }
    if (line.empty()) continue;
    std::string name(trim(line));
    if (name.size() >= 2 && (name.front() == '`' || name.front() == '"') && name.back() == name.front()) {
      name = name.substr(1, name.size() - 2);
    }
    names.push_back(name);
  }
  return names;
}

}  // namespace

DatasetDescriptor prune_columns(std::string_view query, const DatasetDescriptor& descriptor,
                                ChatClient& llm) {
  if (descriptor.kind != DatasetKind::kTable) {
    fail(ErrorKind::kInvalidArgument,
         "prune_columns: '" + descriptor.name + "' is a collection; only tables are pruned");
  }
  auto prompt = prompting::build_prune_prompt(query, descriptor);
  auto response = llm.complete(prompt.request(Phase::kDiscovery));
  auto names = fenced_names(response);
  if (!names) {
    prompt = prompting::with_reprompt(prompt, response, "prune_reprompt");
    names = fenced_names(llm.complete(prompt.request(Phase::kDiscovery)));
  }
  if (!names) {
    logger().warn("column pruning for '{}' gave no usable answer; keeping all columns", descriptor.name);
    return descriptor;
  }
  std::set<std::string> wanted;
  for (const auto& n : *names) {
    for (const auto& c : descriptor.columns) {
      if (c.name == n || to_lower(c.name) == to_lower(n)) wanted.insert(c.name);
    }
  }
  if (wanted.empty()) {
    logger().info("column pruning for '{}' selected no known column; keeping all columns", descriptor.name);
    return descriptor;
  }
  DatasetDescriptor out = descriptor;
  out.columns.clear();
  for (const auto& c : descriptor.columns) {
    if (wanted.count(c.name)) out.columns.push_back(c);
  }
  return out;
}

}  // namespace lakeq
