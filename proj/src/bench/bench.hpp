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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engine/executor.hpp"
#include "json.hpp"
#include "llm/llm.hpp"
#include "plan/plan.hpp"

namespace lakeq::bench {

enum class OutputKind { kValue, kTable, kPlot };
enum class Modality { kSingle, kMulti };

// Closed failure taxonomy. kCorrect marks cases that need no category so
// that counts always add up to the number of cases.
enum class FailureCategory {
  kCorrect,
  kImpossibleActions,
  kDataMisunderstanding,
  kIllogicalMissingSteps,
  kWrongArguments,
  kWrongTool,
};

const char* to_string(OutputKind kind);
const char* to_string(Modality modality);
const char* to_string(FailureCategory category);
std::optional<OutputKind> parse_output_kind(std::string_view text);
std::optional<Modality> parse_modality(std::string_view text);
std::optional<FailureCategory> parse_failure_category(std::string_view text);
const std::vector<FailureCategory>& all_categories();

struct QueryCase {
  std::string id;
  std::string dataset;  // fixture directory holding the catalog
  std::string query;
  OutputKind output = OutputKind::kValue;
  Modality modality = Modality::kSingle;
  std::vector<std::string> datasets;  // handed to the planner, no discovery
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<std::string> gold_ops;
  std::vector<std::string> gold_intents;
  nlohmann::ordered_json gold_result;  // canonical QueryResult JSON
  std::string gold_digest;
};

nlohmann::ordered_json case_to_json(const QueryCase& c);
QueryCase case_from_json(const nlohmann::ordered_json& j);
std::string serialize_suite(const std::vector<QueryCase>& cases);
std::vector<QueryCase> parse_suite(std::string_view text);
std::vector<QueryCase> load_suite(const std::filesystem::path& path);

// The query configuration every bench case runs under.
QueryConfig case_config(const QueryCase& c, std::size_t max_retries = kDefaultMaxRetries);

// ---- fixtures -------------------------------------------------------------

// Scripted responses for one case, {"planning": [...], "mapping": [...], ...}.
using CaseScript = nlohmann::ordered_json;

struct FlawedCase {
  FailureCategory category = FailureCategory::kCorrect;
  CaseScript script;
};

struct FixtureSet {
  std::map<std::string, std::string> files;  // relative path -> bytes
  std::vector<QueryCase> cases;
  std::map<std::string, CaseScript> gold_scripts;
  std::map<std::string, FlawedCase> flawed;
};

// Builds artwork/, rotowire/, suite.json, gold.json and flawed.json from
// the seed alone. Gold results come from the oracle over the generated files.
FixtureSet build_fixtures(std::uint64_t seed);
void write_fixtures(const FixtureSet& set, const std::filesystem::path& out);

// Scripts file written by write_fixtures: {"<case id>": script}.
std::map<std::string, CaseScript> load_scripts(const std::filesystem::path& path);
// Flawed file: {"<case id>": {"category": str, "script": script}}.
std::map<std::string, FlawedCase> load_flawed(const std::filesystem::path& path);

// ---- oracle ---------------------------------------------------------------

// Brute-force answer for a case, computed from the fixture files under
// root/<case.dataset> with plain loops and annotation lookups. Shares no code
// with the query engine.
nlohmann::ordered_json oracle_result(const QueryCase& c, const std::filesystem::path& root);

// Same, reading "<dataset>/<relative path>" through the callback.
using FileReader = std::function<std::string(const std::string&)>;
nlohmann::ordered_json oracle_result(const QueryCase& c, const FileReader& read);

// ---- evaluation -----------------------------------------------------------

// Step description -> intent label (plot, join, image_qa, text_qa,
// aggregate, transform, filter, project).
std::string step_intent(std::string_view description);
std::vector<std::string> plan_intents(const LogicalPlan& plan);

struct CaseResult {
  std::string id;
  bool logical_correct = false;
  bool physical_correct = false;
  FailureCategory category = FailureCategory::kCorrect;
  std::vector<std::string> intents;
  std::vector<std::string> ops;  // attempted operator sequence
  std::string digest;
  std::string error;
};

// Operators in execution order, followed by the operator of a step that
// failed before it produced output.
std::vector<std::string> attempted_ops(const Trace& trace);

// Rules in order, first match wins: no plan or a plan that declares the
// query unanswerable -> Impossible Actions; different set of QA modalities
// than gold -> Data Misunderstanding; other intent mismatch -> Illogical /
// Missing Steps; attempted operators agree with gold so far -> Wrong
// Arguments; otherwise Wrong Tool. Call only for failed cases.
FailureCategory categorize_failure(const Trace& trace, const QueryCase& gold);

CaseResult evaluate_case(const QueryCase& c, const QueryOutcome& outcome);

struct GroupStats {
  std::string group;
  std::size_t cases = 0;
  std::size_t logical = 0;
  std::size_t physical = 0;
};

struct BenchReport {
  std::vector<CaseResult> cases;
  std::vector<GroupStats> groups;  // fixed row order
  std::map<FailureCategory, std::size_t> categories;

  nlohmann::ordered_json to_json() const;
  std::string render_table() const;
};

BenchReport make_report(const std::vector<QueryCase>& cases, std::vector<CaseResult> results);

using BackendFactory = std::function<std::unique_ptr<ChatClient>(const QueryCase&)>;

struct SuiteOptions {
  std::size_t workers = 1;
  std::size_t max_retries = kDefaultMaxRetries;
};

// Runs every case against root/<case.dataset> with a fresh backend per
// case. Failures of single cases are recorded, never thrown.
BenchReport run_suite(const std::vector<QueryCase>& cases, const std::filesystem::path& root,
                      const BackendFactory& backend, const SuiteOptions& options = {});

}  // namespace lakeq::bench
