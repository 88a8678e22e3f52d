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


#include <set>

#include "bench/bench.hpp"
#include "common/text.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace lakeq;
using namespace lakeq::bench;
namespace fs = std::filesystem;

namespace {

const fs::path kData = LAKEQ_DATA_DIR;

const std::vector<QueryCase>& suite() {
  static auto cases = load_suite(testing::fixture_root() / "suite.json");
  return cases;
}

BackendFactory scripts_factory(std::map<std::string, CaseScript> scripts) {
  auto shared = std::make_shared<std::map<std::string, CaseScript>>(std::move(scripts));
  return [shared](const QueryCase& c) -> std::unique_ptr<ChatClient> { return testing::scripted(shared->at(c.id)); };
}

BenchReport gold_report(std::size_t workers = 1) {
  SuiteOptions o;
  o.workers = workers;
  return run_suite(suite(), testing::fixture_root(), scripts_factory(load_scripts(testing::fixture_root() / "gold.json")), o);
}

BenchReport flawed_report() {
  auto scripts = load_scripts(testing::fixture_root() / "gold.json");
  for (auto& [id, f] : load_flawed(testing::fixture_root() / "flawed.json")) scripts[id] = f.script;
  return run_suite(suite(), testing::fixture_root(), scripts_factory(std::move(scripts)));
}

// Trace with one plan built from step descriptions.
Trace trace_with_plan(const std::vector<std::string>& steps) {
  Trace t;
  LogicalPlan p;
  for (std::size_t i = 0; i < steps.size(); ++i) p.steps.push_back({i + 1, steps[i], {}});
  t.plans.push_back(p);
  return t;
}

}  // namespace

TEST_CASE("fixtures depend on the seed alone") {
  auto a = build_fixtures(testing::kFixtureSeed);
  auto b = build_fixtures(testing::kFixtureSeed);
  CHECK(a.files == b.files);
  CHECK(serialize_suite(a.cases) == serialize_suite(b.cases));
  CHECK(a.gold_scripts == b.gold_scripts);
  auto c = build_fixtures(testing::kFixtureSeed + 1);
  CHECK(c.files != a.files);
}

TEST_CASE("the shipped fixtures and transcripts regenerate exactly") {
  auto set = build_fixtures(testing::kFixtureSeed);
  for (const auto& [rel, bytes] : set.files) {
    CAPTURE(rel);
    REQUIRE(fs::exists(kData / "fixtures" / rel));
    CHECK(read_file(kData / "fixtures" / rel) == bytes);
  }
  for (const char* f : {"suite.json", "gold.json", "flawed.json"}) {
    CAPTURE(f);
    CHECK(read_file(kData / "fixtures" / f) == read_file(testing::fixture_root() / f));
  }
  for (const auto& c : set.cases) {
    CAPTURE(c.id);
    auto catalog = load_catalog(testing::fixture_root() / c.dataset);
    FixtureQaBackend qa(catalog);
    auto inner = testing::scripted(set.gold_scripts.at(c.id));
    RecordingChatClient rec(*inner);
    auto out = run_query(c.query, catalog, rec, qa, case_config(c));
    REQUIRE(out.ok());
    CHECK(serialize_transcript(rec.transcript()) == read_file(kData / "transcripts" / (c.id + ".jsonl")));
  }
}

TEST_CASE("the suite covers both lakes, all output kinds and both modalities") {
  const auto& cases = suite();
  REQUIRE(cases.size() == 48);
  std::map<std::string, int> by_dataset, by_output, by_modality;
  std::set<std::string> ids;
  for (const auto& c : cases) {
    ++by_dataset[c.dataset];
    ++by_output[to_string(c.output)];
    ++by_modality[to_string(c.modality)];
    ids.insert(c.id);
    CHECK(!c.gold_ops.empty());
    CHECK(!c.gold_intents.empty());
    CHECK(c.gold_digest.size() == 64);
    bool qa = std::any_of(c.gold_ops.begin(), c.gold_ops.end(),
                          [](const std::string& op) { return op == "visual_qa" || op == "text_qa" || op == "image_select"; });
    CHECK(qa == (c.modality == Modality::kMulti));
    CHECK((c.gold_ops.back() == "plot") == (c.output == bench::OutputKind::kPlot));
  }
  CHECK(ids.size() == cases.size());
  CHECK(by_dataset == std::map<std::string, int>{{"artwork", 24}, {"rotowire", 24}});
  CHECK(by_output == std::map<std::string, int>{{"plot", 16}, {"table", 16}, {"value", 16}});
  CHECK(by_modality == std::map<std::string, int>{{"multi", 24}, {"single", 24}});
  CHECK(parse_suite(serialize_suite(cases)).size() == cases.size());
}

TEST_CASE("the paintings span at least two centuries") {
  std::set<long long> centuries;
  auto lines = split_lines(read_file(testing::fixture_root() / "artwork" / "paintings.csv"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    // title,inception,...; titles carry no commas.
    auto first = lines[i].find(',');
    auto second = lines[i].find(',', first + 1);
    long long year = std::stoll(lines[i].substr(first + 1, second - first - 1));
    centuries.insert((year - 1) / 100 + 1);
  }
  CHECK(centuries.size() >= 2);
}

TEST_CASE("engine answers equal the brute-force oracle for every case") {
  auto scripts = load_scripts(testing::fixture_root() / "gold.json");
  for (const auto& c : suite()) {
    CAPTURE(c.id);
    auto catalog = load_catalog(testing::fixture_root() / c.dataset);
    FixtureQaBackend qa(catalog);
    auto llm = testing::scripted(scripts.at(c.id));
    auto out = run_query(c.query, catalog, *llm, qa, case_config(c));
    REQUIRE_MESSAGE(out.ok(), out.error);
    CHECK(out.result->to_json() == oracle_result(c, testing::fixture_root()));
  }
}

TEST_CASE("gold scripts score 100 percent in every group") {
  auto report = gold_report();
  REQUIRE(report.groups.size() == 8);
  std::vector<std::string> names;
  for (const auto& g : report.groups) {
    names.push_back(g.group);
    CHECK(g.cases > 0);
    CHECK(g.logical == g.cases);
    CHECK(g.physical == g.cases);
  }
  CHECK(names == std::vector<std::string>{"artwork", "rotowire", "single", "multi", "value", "table", "plot", "all"});
  CHECK(report.categories.at(FailureCategory::kCorrect) == 48);
  auto j = report.to_json();
  CHECK(j["groups"].size() == 8);
  CHECK(j["groups"][7]["physical_pct"] == 100.0);
  auto table = report.render_table();
  for (const char* title : {"Artwork overall", "Rotowire overall", "Single modality", "Multiple modalities",
                            "Single value", "Table", "Plot", "All"}) {
    CHECK(table.find(title) != std::string::npos);
  }
  CHECK(table.find("Wrong Tool") != std::string::npos);
}

TEST_CASE("a worker pool gives the same report") {
  CHECK(gold_report(1).to_json() == gold_report(4).to_json());
}

TEST_CASE("flawed scripts land in their injected categories") {
  auto flawed = load_flawed(testing::fixture_root() / "flawed.json");
  std::map<FailureCategory, std::size_t> injected;
  for (const auto& [id, f] : flawed) ++injected[f.category];
  CHECK(injected == std::map<FailureCategory, std::size_t>{{FailureCategory::kImpossibleActions, 4},
                                                           {FailureCategory::kDataMisunderstanding, 9},
                                                           {FailureCategory::kIllogicalMissingSteps, 3},
                                                           {FailureCategory::kWrongArguments, 3},
                                                           {FailureCategory::kWrongTool, 1}});
  auto report = flawed_report();
  for (const auto& r : report.cases) {
    CAPTURE(r.id);
    auto it = flawed.find(r.id);
    CHECK(r.category == (it == flawed.end() ? FailureCategory::kCorrect : it->second.category));
  }
  std::size_t total = 0;
  for (auto cat : all_categories()) total += report.categories[cat];
  CHECK(total == 48);
  CHECK(report.categories[FailureCategory::kCorrect] == 28);
}

TEST_CASE("a plan that reads reports instead of looking at images misunderstands the data") {
  auto flawed = load_flawed(testing::fixture_root() / "flawed.json");
  REQUIRE(flawed.count("artwork-14"));
  CHECK(flawed.at("artwork-14").category == FailureCategory::kDataMisunderstanding);
  auto report = flawed_report();
  auto it = std::find_if(report.cases.begin(), report.cases.end(), [](const CaseResult& r) { return r.id == "artwork-14"; });
  REQUIRE(it != report.cases.end());
  CHECK_FALSE(it->logical_correct);
  CHECK(std::find(it->intents.begin(), it->intents.end(), "image_qa") == it->intents.end());
}

TEST_CASE("step intents follow the keyword rules in order") {
  CHECK(step_intent("Plot the number of paintings per century as a bar chart.") == "plot");
  CHECK(step_intent("Join the teams table with the game reports.") == "join");
  CHECK(step_intent("Ask for every painting image how many swords are depicted.") == "image_qa");
  CHECK(step_intent("Read every game report and extract the points.") == "text_qa");
  CHECK(step_intent("Count the paintings per movement.") == "aggregate");
  CHECK(step_intent("Compute the century of every painting.") == "transform");
  CHECK(step_intent("Select the paintings of the Rococo movement.") == "filter");
  CHECK(step_intent("Show the title column.") == "project");
}

TEST_CASE("failure categories apply their rules in order") {
  QueryCase gold;
  gold.gold_intents = {"image_qa", "aggregate"};
  gold.gold_ops = {"visual_qa", "sql"};

  Trace none;
  CHECK(categorize_failure(none, gold) == FailureCategory::kImpossibleActions);
  CHECK(categorize_failure(trace_with_plan({"This cannot be answered from the data."}), gold) ==
        FailureCategory::kImpossibleActions);
  CHECK(categorize_failure(trace_with_plan({"Read the reports.", "Count them."}), gold) ==
        FailureCategory::kDataMisunderstanding);
  CHECK(categorize_failure(trace_with_plan({"Count the paintings."}), gold) == FailureCategory::kDataMisunderstanding);
  CHECK(categorize_failure(trace_with_plan({"Look at every image.", "Keep only rows where swords > 2."}), gold) ==
        FailureCategory::kIllogicalMissingSteps);

  auto right_plan = trace_with_plan({"Look at every image and count swords.", "Find the maximum count."});
  PhysicalStep s;
  s.logical_index = 1;
  s.op = "visual_qa";
  right_plan.executed.push_back({s, {}, 0, std::nullopt});
  CHECK(categorize_failure(right_plan, gold) == FailureCategory::kWrongArguments);
  right_plan.executed.front().step.op = "text_qa";
  CHECK(categorize_failure(right_plan, gold) == FailureCategory::kWrongTool);
}

TEST_CASE("attempted operators include the step that failed") {
  Trace t = trace_with_plan({"a", "b", "c"});
  PhysicalStep s;
  s.logical_index = 1;
  s.op = "sql";
  t.executed.push_back({s, {}, 0, std::nullopt});
  t.errors.push_back({ErrorPhase::kExecution, 2, "boom", "text_qa"});
  CHECK(attempted_ops(t) == std::vector<std::string>{"sql", "text_qa"});
  // A re-executed step replaces the abandoned one.
  t.executed.push_back({s, {}, 0, std::nullopt});
  t.errors.clear();
  CHECK(attempted_ops(t) == std::vector<std::string>{"sql"});
}

TEST_CASE("category and kind names round-trip") {
  for (auto c : all_categories()) CHECK(parse_failure_category(to_string(c)) == c);
  for (auto k : {bench::OutputKind::kValue, bench::OutputKind::kTable, bench::OutputKind::kPlot}) CHECK(parse_output_kind(to_string(k)) == k);
  for (auto m : {Modality::kSingle, Modality::kMulti}) CHECK(parse_modality(to_string(m)) == m);
  CHECK(to_string(FailureCategory::kIllogicalMissingSteps) == std::string("Illogical / Missing Steps"));
}
