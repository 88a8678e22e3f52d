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

#include <regex>

#include "common/log.hpp"
#include "common/text.hpp"
#include "engine/executor.hpp"

namespace lakeq {

const char* to_string(BacktrackTarget target) {
  return target == BacktrackTarget::kPlanning ? "planning" : "mapping";
}

namespace {

// "Yes", "no.", "YES - because ..." → the leading yes/no word.
std::optional<bool> yes_no(std::string_view text) {
  auto lower = to_lower(trim(text));
  std::size_t end = 0;
  while (end < lower.size() && std::isalpha(static_cast<unsigned char>(lower[end]))) ++end;
  auto word = lower.substr(0, end);
  if (word == "yes") return true;
  if (word == "no") return false;
  return std::nullopt;
}

}  // namespace

RecoveryDecision parse_recovery_answers(std::string_view response, std::vector<int>* missing) {
  static const std::regex kAnswer(R"(^\s*\**\s*answer\s*\(\s*([1-6])\s*\)\s*\**\s*:\s*\**\s*(.*?)\s*$)",
                                  std::regex::icase);
  std::map<int, std::vector<std::string>> answers;
  int current = 0;
  for (const auto& line : split_lines(response)) {
    std::smatch m;
    if (std::regex_match(line, m, kAnswer)) {
      current = std::stoi(m[1].str());
      answers[current].push_back(m[2].str());
    } else if ((current == 1 || current == 2) && !trim(line).empty()) {
      // Free-text answers may run over several lines.
      answers[current].back() += "\n" + line;
    } else {
      current = 0;
    }
  }
  RecoveryDecision d;
  bool* slots[] = {&d.flaw_in_plan, &d.alternative_plan, &d.different_tool, &d.update_args};
  for (int k = 3; k <= 6; ++k) {
    std::optional<bool> value;
    bool ambiguous = false;
    for (const auto& a : answers[k]) {
      auto v = yes_no(a);
      if (!v || (value && *value != *v)) ambiguous = true;
      value = v;
    }
    if (!value || ambiguous) {
      if (missing) missing->push_back(k);
      continue;
    }
    *slots[k - 3] = *value;
  }
  std::vector<std::string> hints;
  for (int k = 1; k <= 2; ++k) {
    if (!answers[k].empty()) hints.push_back("(" + std::to_string(k) + ") " + answers[k].front());
  }
  d.hints = join(hints, "\n");
  return d;
}

RecoveryDecision analyze_error(const ErrorReport& report, const ExecutionState& st, ChatClient& llm) {
  auto prompt = prompting::build_error_prompt(report, st.query, st.plan ? &*st.plan : nullptr, st.history);
  auto response = llm.complete(prompt.request(Phase::kRecovery));
  std::vector<int> missing;
  auto decision = parse_recovery_answers(response, &missing);
  if (missing.empty()) {
    if (decision.flaw_in_plan != decision.alternative_plan) {
      decision.flagged = true;
      decision.flag_reason = "answers (3) and (4) disagree; backtracking to planning";
    }
    return decision;
  }
  prompt = prompting::with_reprompt(prompt, response, "error_reprompt");
  response = llm.complete(prompt.request(Phase::kRecovery));
  missing.clear();
  decision = parse_recovery_answers(response, &missing);
  if (!missing.empty()) {
    std::vector<std::string> ks;
    for (int k : missing) ks.push_back("(" + std::to_string(k) + ")");
    logger().warn("error analysis lacks answers {} after a reprompt; backtracking to planning", join(ks, ", "));
    RecoveryDecision fallback;
    fallback.flaw_in_plan = true;
    fallback.hints = decision.hints;
    fallback.flagged = true;
    fallback.flag_reason = "no usable answer for " + join(ks, ", ") +
                           " after one reprompt; conservative backtrack to planning";
    return fallback;
  }
  if (decision.flaw_in_plan != decision.alternative_plan) {
    decision.flagged = true;
    decision.flag_reason = "answers (3) and (4) disagree; backtracking to planning";
  }
  return decision;
}

BacktrackTarget backtrack_target(const RecoveryDecision& decision) {
  return decision.flaw_in_plan || decision.alternative_plan ? BacktrackTarget::kPlanning
                                                            : BacktrackTarget::kMapping;
}

void apply_recovery(ExecutionState& st, const RecoveryDecision& decision, const ErrorReport& report) {
  if (st.retries_left == 0) {
    fail(ErrorKind::kExhausted, "no recovery attempts left; last error: " + report.message);
  }
  prompting::Feedback feedback{report.message, decision.hints.empty() ? "(none)" : decision.hints};
  bool to_planning = backtrack_target(decision) == BacktrackTarget::kPlanning ||
                     report.phase == ErrorPhase::kPlanning || !st.plan;
  if (to_planning) {
    st.plan.reset();
    st.cursor = 1;
    st.env = st.base_env;
    st.history.clear();
    st.plot.reset();
    st.mapping_feedback.reset();
    st.planning_feedback = std::move(feedback);
  } else {
    st.mapping_feedback = std::move(feedback);
  }
  st.error.reset();
  --st.retries_left;
}

}  // namespace lakeq
