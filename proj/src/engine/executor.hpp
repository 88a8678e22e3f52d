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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catalog/catalog.hpp"
#include "common/environment.hpp"
#include "common/error.hpp"
#include "llm/llm.hpp"
#include "operators/operators.hpp"
#include "plan/plan.hpp"
#include "prompting/prompting.hpp"

namespace lakeq {

inline constexpr std::size_t kDefaultMaxRetries = 3;
inline constexpr std::size_t kDefaultDiscoveryK = 3;

struct QueryConfig {
  std::size_t discovery_k = kDefaultDiscoveryK;
  // When non-empty, these datasets are used as-is and discovery is skipped.
  std::vector<std::string> datasets;
  bool prune = true;
  std::size_t max_retries = kDefaultMaxRetries;
  std::vector<prompting::FewShotExample> fewshot = prompting::default_fewshot();
  int max_tokens = 1024;
};

struct RecoveryDecision {
  bool flaw_in_plan = false;      // (3)
  bool alternative_plan = false;  // (4)
  bool different_tool = false;    // (5)
  bool update_args = false;       // (6)
  std::string hints;              // answers (1) and (2), verbatim
  bool flagged = false;
  std::string flag_reason;
};

enum class BacktrackTarget { kPlanning, kMapping };
const char* to_string(BacktrackTarget target);

struct LlmCall {
  Phase tag;
  std::string request_digest;
  std::string template_hash;
  std::string response;
};

struct StepRecord {
  PhysicalStep step;
  std::vector<Column> output_schema;
  std::size_t output_rows = 0;
  std::optional<std::string> udf_expression;
};

struct RecoveryEvent {
  ErrorReport error;
  RecoveryDecision decision;
  BacktrackTarget target = BacktrackTarget::kPlanning;
  std::size_t attempt = 0;
};

struct Trace {
  std::string query;
  std::vector<DatasetDescriptor> datasets;   // after pruning
  std::vector<LogicalPlan> plans;            // every plan, in order
  std::vector<StepRecord> executed;          // every executed step, incl. abandoned ones
  std::vector<LlmCall> llm_calls;
  std::vector<RecoveryEvent> recoveries;
  std::vector<ErrorReport> errors;           // every error raised, in order

  nlohmann::ordered_json to_json() const;
};

struct ExecutionState {
  std::string query;
  std::vector<DatasetDescriptor> descriptors;
  Environment base_env;
  std::optional<LogicalPlan> plan;
  std::size_t cursor = 1;  // next logical step, 1-based
  Environment env;
  std::vector<PhysicalStep> history;
  std::optional<PlotSpec> plot;  // set when the latest step drew a plot
  std::size_t retries_left = kDefaultMaxRetries;
  std::optional<prompting::Feedback> planning_feedback;
  std::optional<prompting::Feedback> mapping_feedback;
  std::optional<ErrorReport> error;
  Trace* trace = nullptr;

  bool planned() const { return plan.has_value(); }
  bool finished() const { return plan && cursor > plan->steps.size(); }
};

enum class ResultKind { kScalar, kTable, kPlot };
const char* to_string(ResultKind kind);

struct QueryResult {
  ResultKind kind = ResultKind::kTable;
  Cell scalar;
  Relation table;
  std::optional<PlotSpec> plot;
  std::vector<PhysicalStep> physical_plan;

  // Canonical JSON of the answer alone (no trace).
  nlohmann::ordered_json to_json() const;
  std::string digest() const;
};

struct QueryOutcome {
  std::optional<QueryResult> result;
  Trace trace;
  std::string error;  // empty on success
  ErrorKind error_kind = ErrorKind::kInternal;

  bool ok() const { return result.has_value(); }
};

// Discovery: explicit datasets or lexical retrieval, then column pruning.
// Fills descriptors and the base environment.
ExecutionState begin_query(std::string_view query, const Catalog& catalog, ChatClient& llm,
                           const QueryConfig& config, Trace* trace);

// Planning prompt → logical plan. On failure sets state.error.
void plan_once(ExecutionState& state, ChatClient& llm, const QueryConfig& config);

// Maps, validates and runs the step at the cursor. On failure sets
// state.error and leaves cursor, env and history untouched.
void step_once(ExecutionState& state, ChatClient& llm, OperatorContext& ctx,
               const QueryConfig& config);

// Six-question analysis of state.error.
RecoveryDecision analyze_error(const ErrorReport& report, const ExecutionState& state,
                               ChatClient& llm);

// Parses "ANSWER (k): ..." lines. Missing or ambiguous (3)-(6) are listed
// in `missing`.
RecoveryDecision parse_recovery_answers(std::string_view response, std::vector<int>* missing);

BacktrackTarget backtrack_target(const RecoveryDecision& decision);

// Backtracks per the decision and spends one retry. Error(kExhausted) when
// no retry is left.
void apply_recovery(ExecutionState& state, const RecoveryDecision& decision,
                    const ErrorReport& report);

// The whole pipeline. Backend failures (transport, replay miss, exhausted
// script) end the query with the trace so far.
QueryOutcome run_query(std::string_view query, const Catalog& catalog, ChatClient& llm,
                       QaBackend& qa, const QueryConfig& config = {});

// Human-readable plan trace for `explain`.
std::string explain(const QueryOutcome& outcome);

}  // namespace lakeq
