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


#include "bench/bench.hpp"
#include "doctest.h"
#include "engine/executor.hpp"
#include "support.hpp"

using namespace lakeq;

namespace {

struct Run {
  bench::QueryCase c;
  QueryOutcome outcome;
};

const bench::QueryCase& find_case(const std::string& id) {
  static auto cases = bench::load_suite(testing::fixture_root() / "suite.json");
  for (const auto& c : cases) {
    if (c.id == id) return c;
  }
  FAIL("no case " << id);
  return cases.front();
}

Run run_gold(const std::string& id) {
  static auto scripts = bench::load_scripts(testing::fixture_root() / "gold.json");
  Run r{find_case(id), {}};
  auto catalog = load_catalog(testing::fixture_root() / r.c.dataset);
  FixtureQaBackend qa(catalog);
  auto llm = testing::scripted(scripts.at(id));
  r.outcome = run_query(r.c.query, catalog, *llm, qa, bench::case_config(r.c));
  return r;
}

std::vector<std::string> ops(const QueryResult& r) {
  std::vector<std::string> out;
  for (const auto& s : r.physical_plan) out.push_back(s.op);
  return out;
}

}  // namespace

TEST_CASE("query 1 joins, reads the reports and aggregates") {
  auto r = run_gold("rotowire-17");
  CHECK(r.c.query == "For every team, what is the highest number of points they scored in a game?");
  REQUIRE_MESSAGE(r.outcome.ok(), r.outcome.error);
  CHECK(ops(*r.outcome.result) == std::vector<std::string>{"sql", "text_qa", "sql"});
  const auto& first = r.outcome.result->physical_plan[0];
  CHECK(std::get<std::string>(first.args.at("query")).find("JOIN") != std::string::npos);
  CHECK(r.outcome.result->kind == ResultKind::kTable);
}

TEST_CASE("query 2 computes centuries, looks at images, aggregates and plots") {
  auto r = run_gold("artwork-21");
  CHECK(r.c.query == "Plot the maximum number of swords depicted on the paintings of each century.");
  REQUIRE_MESSAGE(r.outcome.ok(), r.outcome.error);
  CHECK(ops(*r.outcome.result) == std::vector<std::string>{"udf_transform", "visual_qa", "sql", "plot"});
  REQUIRE(r.outcome.result->kind == ResultKind::kPlot);
  const auto& plot = *r.outcome.result->plot;
  CHECK(plot.kind == "bar");
  CHECK(plot.data.size() >= 2);
  CHECK(std::is_sorted(plot.data.begin(), plot.data.end(),
                       [](const auto& a, const auto& b) { return std::get<double>(a.first) < std::get<double>(b.first); }));
}

TEST_CASE("results match the stored gold answers") {
  for (const auto* id : {"artwork-01", "artwork-05", "rotowire-04", "rotowire-18"}) {
    CAPTURE(id);
    auto r = run_gold(id);
    REQUIRE_MESSAGE(r.outcome.ok(), r.outcome.error);
    CHECK(r.outcome.result->to_json() == r.c.gold_result);
    CHECK(r.outcome.result->digest() == r.c.gold_digest);
  }
}

TEST_CASE("a one-by-one answer is a scalar") {
  auto r = run_gold("artwork-01");
  REQUIRE(r.outcome.ok());
  CHECK(r.outcome.result->kind == ResultKind::kScalar);
  CHECK(r.outcome.result->to_json()["kind"] == "scalar");
}

TEST_CASE("the trace records plans, steps and every model call") {
  auto r = run_gold("artwork-21");
  REQUIRE(r.outcome.ok());
  const auto& t = r.outcome.trace;
  CHECK(t.plans.size() == 1);
  CHECK(t.executed.size() == 4);
  CHECK(t.recoveries.empty());
  CHECK(t.errors.empty());
  REQUIRE(!t.llm_calls.empty());
  CHECK(t.llm_calls.front().tag == Phase::kPlanning);
  auto j = t.to_json();
  for (const auto* key : {"query", "datasets", "logical_plans", "executed_steps", "recovery", "errors", "llm_calls"}) {
    CHECK(j.contains(key));
  }
  auto text = explain(r.outcome);
  CHECK(text.find("Logical plan:") != std::string::npos);
  CHECK(text.find("r4 = plot(") != std::string::npos);
  CHECK(text.find("floor((inception - 1) / 100) + 1") != std::string::npos);
}

TEST_CASE("discovery picks datasets when none are given") {
  auto catalog = load_catalog(testing::fixture_root() / "rotowire");
  auto llm = testing::scripted({{"discovery", {"```\n[\"name\"]\n```"}}});
  QueryConfig config;
  config.discovery_k = 1;
  Trace trace;
  auto st = begin_query("Which teams are there?", catalog, *llm, config, &trace);
  REQUIRE(st.descriptors.size() == 1);
  CHECK(st.descriptors[0].name == "teams");
  CHECK(st.descriptors[0].column_names() == std::vector<std::string>{"name"});
  CHECK(st.base_env.contains("teams"));

  config.datasets = {"nope"};
  CHECK_THROWS_AS(begin_query("q", catalog, *llm, config, &trace), Error);
}

TEST_CASE("a backend failure ends the query with the trace so far") {
  auto catalog = load_catalog(testing::fixture_root() / "artwork");
  FixtureQaBackend qa(catalog);
  auto llm = testing::scripted({{"planning", {testing::plan_text({"Count the paintings."})}}});
  QueryConfig config;
  config.datasets = {"paintings"};
  config.prune = false;
  auto out = run_query("How many paintings are there?", catalog, *llm, qa, config);
  CHECK_FALSE(out.ok());
  CHECK(out.error_kind == ErrorKind::kExhausted);
  CHECK(out.trace.plans.size() == 1);
}
