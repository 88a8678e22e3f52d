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

#include "engine/executor.hpp"

#include "common/text.hpp"

namespace lakeq {

const char* to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::kScalar: return "scalar";
    case ResultKind::kTable: return "table";
    case ResultKind::kPlot: return "plot";
  }
  return "table";
}

namespace {

// Records every exchange into the query trace.
class TracingClient : public ChatClient {
 public:
  TracingClient(ChatClient& inner, Trace& trace) : inner_(inner), trace_(trace) {}
  std::string complete(const ChatRequest& request) override {
    auto response = inner_.complete(request);
    trace_.llm_calls.push_back({request.tag, request_digest(request), request.template_hash, response});
    return response;
  }

 private:
  ChatClient& inner_;
  Trace& trace_;
};

nlohmann::ordered_json schema_json(const std::vector<Column>& schema) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : schema) arr.push_back({{"name", c.name}, {"type", to_string(c.type)}});
  return arr;
}

nlohmann::ordered_json relation_json(const Relation& rel) {
  nlohmann::ordered_json j;
  j["columns"] = schema_json(rel.schema());
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rel.rows()) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_to_json(c));
    rows.push_back(std::move(r));
  }
  return j;
}

std::vector<std::string> names_of(const std::vector<DatasetDescriptor>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.name);
  return out;
}

}  // namespace

nlohmann::ordered_json QueryResult::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  switch (kind) {
    case ResultKind::kScalar: j["value"] = cell_to_json(scalar); break;
    case ResultKind::kTable: {
      auto rel = relation_json(table);
      j["columns"] = rel["columns"];
      j["rows"] = rel["rows"];
      break;
    }
    case ResultKind::kPlot: j["plot"] = plot_to_json(*plot); break;
  }
  return j;
}

std::string QueryResult::digest() const { return sha256_hex(to_json().dump()); }

nlohmann::ordered_json Trace::to_json() const {
  nlohmann::ordered_json j;
  j["query"] = query;
  auto& ds = j["datasets"] = nlohmann::ordered_json::array();
  for (const auto& d : datasets) {
    ds.push_back({{"name", d.name}, {"kind", to_string(d.kind)}, {"columns", d.column_names()}});
  }
  auto& plans_j = j["logical_plans"] = nlohmann::ordered_json::array();
  for (const auto& p : plans) {
    auto steps = nlohmann::ordered_json::array();
    for (const auto& s : p.steps) {
      steps.push_back({{"index", s.index}, {"description", s.description},
                       {"datasets", s.referenced_datasets}});
    }
    plans_j.push_back(std::move(steps));
  }
  auto& ex = j["executed_steps"] = nlohmann::ordered_json::array();
  for (const auto& r : executed) {
    auto s = step_to_json(r.step);
    s["output_schema"] = schema_json(r.output_schema);
    s["output_rows"] = r.output_rows;
    if (r.udf_expression) s["udf_expression"] = *r.udf_expression;
    ex.push_back(std::move(s));
  }
  auto& rec = j["recovery"] = nlohmann::ordered_json::array();
  for (const auto& e : recoveries) {
    nlohmann::ordered_json ev;
    ev["attempt"] = e.attempt;
    ev["error"] = {{"phase", to_string(e.error.phase)},
                   {"step", e.error.step_index},
                   {"operator", e.error.op},
                   {"message", e.error.message}};
    ev["decision"] = {{"flaw_in_plan", e.decision.flaw_in_plan},
                      {"alternative_plan", e.decision.alternative_plan},
                      {"different_tool", e.decision.different_tool},
                      {"update_args", e.decision.update_args},
                      {"hints", e.decision.hints},
                      {"flagged", e.decision.flagged},
                      {"flag_reason", e.decision.flag_reason}};
    ev["target"] = to_string(e.target);
    rec.push_back(std::move(ev));
  }
  auto& errs = j["errors"] = nlohmann::ordered_json::array();
  for (const auto& e : errors) {
    errs.push_back({{"phase", to_string(e.phase)},
                    {"step", e.step_index},
                    {"operator", e.op},
                    {"message", e.message}});
  }
  auto& calls = j["llm_calls"] = nlohmann::ordered_json::array();
  for (const auto& c : llm_calls) {
    calls.push_back({{"tag", to_string(c.tag)},
                     {"request_digest", c.request_digest},
                     {"template_hash", c.template_hash},
                     {"response", c.response}});
  }
  return j;
}

ExecutionState begin_query(std::string_view query, const Catalog& catalog, ChatClient& llm,
                           const QueryConfig& config, Trace* trace) {
  if (catalog.empty()) fail(ErrorKind::kInvalidArgument, "the catalog has no datasets");
  ExecutionState st;
  st.query = std::string(query);
  st.retries_left = config.max_retries;
  st.trace = trace;
  std::vector<DatasetDescriptor> selected;
  if (!config.datasets.empty()) {
    for (const auto& name : config.datasets) {
      const auto* d = catalog.find(name);
      if (!d) fail(ErrorKind::kInvalidArgument, "unknown dataset '" + name + "'");
      selected.push_back(*d);
    }
  } else {
    selected = discover(query, catalog, config.discovery_k);
  }
  for (auto& d : selected) {
    if (config.prune && d.kind == DatasetKind::kTable) d = prune_columns(query, d, llm);
    auto full = catalog.relation(d.name);
    if (d.columns.size() == full->arity()) {
      st.base_env.put(d.name, full);
    } else {
      st.base_env.put(d.name, full->project(d.column_names()));
    }
  }
  st.descriptors = std::move(selected);
  st.env = st.base_env;
  if (trace) {
    trace->query = st.query;
    trace->datasets = st.descriptors;
  }
  return st;
}

void plan_once(ExecutionState& st, ChatClient& llm, const QueryConfig& config) {
  auto prompt = prompting::build_planning_prompt(st.query, st.descriptors,
                                                 prompting::capabilities(default_operators()),
                                                 config.fewshot, st.planning_feedback);
  auto response = llm.complete(prompt.request(Phase::kPlanning, config.max_tokens));
  try {
    auto plan = parse_logical_plan(response, names_of(st.descriptors));
    plan.query = st.query;
    if (st.trace) st.trace->plans.push_back(plan);
    st.plan = std::move(plan);
    st.cursor = 1;
    st.planning_feedback.reset();
  } catch (const Error& e) {
    st.error = ErrorReport{ErrorPhase::kPlanning, 0, e.what(), ""};
  }
}

void step_once(ExecutionState& st, ChatClient& llm, OperatorContext& ctx, const QueryConfig& config) {
  if (!st.plan || st.cursor > st.plan->steps.size()) {
    fail(ErrorKind::kInternal, "step_once called without a pending step");
  }
  const auto& lstep = st.plan->steps[st.cursor - 1];
  const auto& ops = default_operators();
  auto prompt = prompting::build_mapping_prompt(*st.plan, lstep, prompting::operator_summaries(ops),
                                                prompting::summarize_environment(st.env), st.history,
                                                st.mapping_feedback);
  auto response = llm.complete(prompt.request(Phase::kMapping, config.max_tokens));

  PhysicalStep step;
  step.logical_index = st.cursor;
  step.output = "r" + std::to_string(st.cursor);
  try {
    auto choice = parse_operator_choice(response);
    step.op = choice.op;
    step.args = std::move(choice.args);
  } catch (const Error& e) {
    st.error = ErrorReport{ErrorPhase::kMapping, st.cursor, e.what(), ""};
    return;
  }
  auto validation = validate_step(step, st.env, ops);
  if (!validation.ok()) {
    st.error = ErrorReport{ErrorPhase::kMapping, st.cursor, validation.message(), step.op};
    return;
  }
  OperatorOutput out;
  try {
    out = execute_operator(step, st.env, ctx);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kBackend:
      case ErrorKind::kReplayMiss:
      case ErrorKind::kExhausted:
      case ErrorKind::kInternal:
        throw;
      default:
        st.error = ErrorReport{ErrorPhase::kExecution, st.cursor, e.what(), step.op};
        return;
    }
  }
  if (st.trace) {
    st.trace->executed.push_back({step, out.relation.schema(), out.relation.size(), out.udf_expression});
  }
  st.env.put(step.output, std::move(out.relation));
  st.history.push_back(std::move(step));
  ++st.cursor;
  st.mapping_feedback.reset();
  st.plot = std::move(out.plot);
}

namespace {

QueryResult finish(const ExecutionState& st) {
  QueryResult r;
  r.physical_plan = st.history;
  if (st.history.empty()) fail(ErrorKind::kInternal, "query finished without executing a step");
  const auto& last = st.history.back();
  const Relation* rel = st.env.find(last.output);
  if (last.op == "plot" && st.plot) {
    r.kind = ResultKind::kPlot;
    r.plot = st.plot;
    r.table = *rel;
  } else if (rel->size() == 1 && rel->arity() == 1) {
    r.kind = ResultKind::kScalar;
    r.scalar = rel->rows()[0][0];
    r.table = *rel;
  } else {
    r.kind = ResultKind::kTable;
    r.table = *rel;
  }
  return r;
}

}  // namespace

QueryOutcome run_query(std::string_view query, const Catalog& catalog, ChatClient& llm, QaBackend& qa,
                       const QueryConfig& config) {
  QueryOutcome outcome;
  TracingClient traced(llm, outcome.trace);
  outcome.trace.query = std::string(query);
  OperatorContext ctx{&catalog, &qa, &traced};
  try {
    auto st = begin_query(query, catalog, traced, config, &outcome.trace);
    while (true) {
      if (!st.planned()) {
        plan_once(st, traced, config);
      } else if (!st.finished()) {
        step_once(st, traced, ctx, config);
      } else {
        break;
      }
      if (!st.error) continue;
      auto report = *st.error;
      st.error.reset();
      outcome.trace.errors.push_back(report);
      if (st.retries_left == 0) {
        outcome.error = "query failed after " + std::to_string(config.max_retries) +
                        " recovery attempts; last error (" + to_string(report.phase) + "): " +
                        report.message;
        outcome.error_kind = ErrorKind::kQueryFailed;
        return outcome;
      }
      auto decision = analyze_error(report, st, traced);
      auto target = backtrack_target(decision);
      if (report.phase == ErrorPhase::kPlanning && target == BacktrackTarget::kMapping) {
        target = BacktrackTarget::kPlanning;
        decision.flagged = true;
        decision.flag_reason += std::string(decision.flag_reason.empty() ? "" : "; ") +
                                "planning failed, so the retry goes back to planning";
        decision.flaw_in_plan = true;
      }
      outcome.trace.recoveries.push_back({report, decision, target, config.max_retries - st.retries_left + 1});
      apply_recovery(st, decision, report);
    }
    outcome.result = finish(st);
  } catch (const Error& e) {
    outcome.error = e.what();
    outcome.error_kind = e.kind();
  }
  return outcome;
}

std::string explain(const QueryOutcome& outcome) {
  const auto& t = outcome.trace;
  std::string out = "Query: " + t.query + "\n\nDatasets:\n";
  for (const auto& d : t.datasets) {
    out += "  " + d.name + " (" + to_string(d.kind) + "): " + join(d.column_names(), ", ") + "\n";
  }
  for (std::size_t i = 0; i < t.plans.size(); ++i) {
    out += "\nLogical plan";
    if (t.plans.size() > 1) out += " (attempt " + std::to_string(i + 1) + ")";
    out += ":\n";
    for (const auto& line : split_lines(render_logical_plan(t.plans[i]))) out += "  " + line + "\n";
  }
  if (outcome.result) {
    out += "\nPhysical plan:\n";
    for (const auto& line : split_lines(render_physical_plan(outcome.result->physical_plan))) {
      if (!line.empty()) out += "  " + line + "\n";
    }
    out += "\nStep outputs:\n";
    for (const auto& s : outcome.result->physical_plan) {
      for (auto it = t.executed.rbegin(); it != t.executed.rend(); ++it) {
        if (it->step == s) {
          Relation shape(it->output_schema);
          out += "  " + s.output + " " + shape.schema_string() + ", " + std::to_string(it->output_rows) +
                 " rows";
          if (it->udf_expression) out += ", expression: " + *it->udf_expression;
          out += "\n";
          break;
        }
      }
    }
  }
  if (!t.recoveries.empty()) {
    out += "\nRecovery:\n";
    for (const auto& r : t.recoveries) {
      out += "  attempt " + std::to_string(r.attempt) + ": " + to_string(r.error.phase) + " error";
      if (r.error.step_index) out += " at step " + std::to_string(r.error.step_index);
      out += " -> back to " + std::string(to_string(r.target));
      if (r.decision.flagged) out += " [flagged: " + r.decision.flag_reason + "]";
      out += "\n";
      for (const auto& line : split_lines(r.error.message)) out += "    | " + line + "\n";
    }
  }
  out += "\nLLM calls: " + std::to_string(t.llm_calls.size()) + "\n";
  if (!outcome.ok()) out += "\nFailed: " + outcome.error + "\n";
  return out;
}

}  // namespace lakeq
