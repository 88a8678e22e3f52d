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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "bench/bench.hpp"
#include "common/text.hpp"
#include "sql/sql.hpp"
#include "sql_oracle.hpp"
#include "support.hpp"
#include "udf/expr.hpp"

using namespace lakeq;
using namespace lakeq::bench;
namespace fs = std::filesystem;

namespace {

const fs::path kData = LAKEQ_DATA_DIR;
const fs::path kFixtures = kData / "fixtures";
const fs::path kTranscripts = kData / "transcripts";

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::vector<QueryCase> shipped_suite() { return load_suite(kFixtures / "suite.json"); }

const QueryCase& find_case(const std::vector<QueryCase>& cases, const std::string& id) {
  for (const auto& c : cases)
    if (c.id == id) return c;
  fail(ErrorKind::kInvalidArgument, "no case " + id);
}

QueryOutcome replay_case(const QueryCase& c) {
  auto catalog = load_catalog(kFixtures / c.dataset);
  FixtureQaBackend qa(catalog);
  ReplayChatClient llm(load_transcript(kTranscripts / (c.id + ".jsonl")));
  return run_query(c.query, catalog, llm, qa, case_config(c));
}

std::vector<std::string> ops_of(const Trace& t) {
  std::vector<std::string> ops;
  for (const auto& e : t.executed) ops.push_back(e.step.op);
  return ops;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

// 1. The two worked queries replay to their operator sequences quickly.
Verdict worked_queries() {
  Verdict v;
  auto cases = shipped_suite();
  const std::vector<std::pair<std::string, std::vector<std::string>>> expected = {
      {"rotowire-17", {"sql", "text_qa", "sql"}},
      {"artwork-21", {"udf_transform", "visual_qa", "sql", "plot"}}};
  for (const auto& [id, ops] : expected) {
    const auto& c = find_case(cases, id);
    auto start = std::chrono::steady_clock::now();
    auto out = replay_case(c);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.ok()) {
      v.fail(id + ": " + out.error);
      continue;
    }
    if (ops_of(out.trace) != ops) v.fail(id + " ran " + join(ops_of(out.trace)));
    if (secs >= 5.0) v.fail(id + " took " + std::to_string(secs) + " s");
    if (sha256_hex(out.result->to_json().dump()) != c.gold_digest) v.fail(id + " answer differs");
  }
  return v;
}

// 2. Every case answers what the brute-force oracle computes.
Verdict engine_matches_oracle() {
  Verdict v;
  for (const auto& c : shipped_suite()) {
    auto out = replay_case(c);
    if (!out.ok()) {
      v.fail(c.id + ": " + out.error);
      continue;
    }
    if (out.result->to_json() != oracle_result(c, kFixtures)) v.fail(c.id + " differs from the oracle");
  }
  return v;
}

// 3. Random SQL agrees with the independent evaluator.
Verdict sql_campaign() {
  Verdict v;
  auto campaign = testing::run_sql_campaign(20261016, 1000);
  if (campaign.cases < 1000) v.fail("only " + std::to_string(campaign.cases) + " cases");
  if (campaign.mismatches || campaign.errors)
    v.fail(std::to_string(campaign.mismatches) + " mismatches, " + std::to_string(campaign.errors) + " errors" +
           (campaign.failures.empty() ? "" : ": " + campaign.failures.front()));
  return v;
}

// 4. Nothing but SELECT reaches the engine.
Verdict security_guard() {
  Verdict v;
  auto corpus = testing::security_corpus();
  if (corpus.size() < 50) v.fail("corpus has " + std::to_string(corpus.size()) + " statements");
  Environment env;
  env.put("t", Relation({{"a", ColumnType::kNumber}}, {{1.0}}));
  for (const auto& s : corpus) {
    try {
      sql::execute_sql(s, env);
      v.fail("accepted: " + s);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSecurity) v.fail("wrong error for: " + s);
    }
  }
  return v;
}

// 5. Century expressions match integer arithmetic and yield NULL on bad input.
Verdict udf_goldens() {
  Verdict v;
  auto oracle = [](long long y) { return static_cast<double>((y - 1) / 100 + 1); };
  const std::vector<Column> num = {{"inception", ColumnType::kNumber}};
  const std::vector<Column> text = {{"inception", ColumnType::kText}};
  auto from_num = udf::parse_expr("floor((inception - 1) / 100) + 1");
  auto from_text = udf::parse_expr("floor((parse_int(inception) - 1) / 100) + 1");
  for (long long y : {1503LL, 1600LL, 1601LL, 2000LL, 2001LL}) {
    if (udf::evaluate(*from_num, num, {static_cast<double>(y)}) != Cell{oracle(y)}) v.fail("year " + std::to_string(y));
    if (udf::evaluate(*from_text, text, {std::to_string(y)}) != Cell{oracle(y)}) v.fail("text year " + std::to_string(y));
  }
  if (!is_null(udf::evaluate(*from_num, num, {Cell{}}))) v.fail("missing inception is not NULL");
  if (!is_null(udf::evaluate(*from_num, num, {std::string("circa 1600")}))) v.fail("mistyped inception is not NULL");
  if (!is_null(udf::evaluate(*from_text, text, {std::string("unknown")}))) v.fail("non-numeric inception is not NULL");
  // Every painting of the fixture lake.
  auto catalog = load_catalog(kFixtures / "artwork");
  auto paintings = catalog.relation("paintings");
  auto idx = paintings->find_column("inception").value();
  const std::vector<Column> schema = {paintings->column(idx)};
  for (const auto& row : paintings->rows()) {
    const Cell& cell = row[idx];
    auto got = udf::evaluate(*from_num, schema, Row{cell});
    if (std::holds_alternative<double>(cell)) {
      if (got != Cell{oracle(static_cast<long long>(std::get<double>(cell)))}) v.fail("painting century differs");
    } else if (!is_null(got)) {
      v.fail("non-numeric painting inception is not NULL");
    }
  }
  return v;
}

// 6. Injected faults are recovered from.
Verdict recovery() {
  Verdict v;
  for (const auto& s : testing::recovery_scenarios()) {
    auto problems = testing::check_recovery(s, 3);
    if (!problems.empty()) v.fail(s.name + ": " + problems.front());
  }
  return v;
}

struct CliRun {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

CliRun cli(const std::string& args) {
  CliRun r;
  std::string cmd = std::string(LAKEQ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// 7. Replaying through the CLI is byte-for-byte deterministic.
Verdict cli_replay_determinism() {
  Verdict v;
  testing::TempDir tmp;
  auto out_dir = tmp.path() / "out";
  for (const auto& c : shipped_suite()) {
    std::string datasets;
    for (const auto& d : c.datasets) datasets += (datasets.empty() ? "" : ",") + d;
    auto args = "replay --no-prune --datasets " + quote(datasets) + " --transcript " +
                quote((kTranscripts / (c.id + ".jsonl")).string()) + " --out-dir " + quote(out_dir.string()) + " " +
                quote((kFixtures / c.dataset).string()) + " " + quote(c.query);
    std::vector<std::string> runs;
    for (int i = 0; i < 2; ++i) {
      fs::remove_all(out_dir);
      fs::create_directories(out_dir);
      auto r = cli(args);
      if (r.code != 0) {
        v.fail(c.id + " exited " + std::to_string(r.code));
        break;
      }
      std::string snapshot = r.out;
      if (c.output == bench::OutputKind::kPlot) {
        if (!fs::exists(out_dir / "plot.json") || !fs::exists(out_dir / "plot.svg")) v.fail(c.id + " wrote no plot");
        else snapshot += read_file(out_dir / "plot.json") + read_file(out_dir / "plot.svg");
      }
      runs.push_back(snapshot);
    }
    if (runs.size() == 2 && runs[0] != runs[1]) v.fail(c.id + " output differs between runs");
  }
  return v;
}

// 8. The report has every group, scores gold scripts fully and counts the
// injected failures exactly.
Verdict report_shape() {
  Verdict v;
  auto suite = shipped_suite();
  auto gold = load_scripts(kFixtures / "gold.json");
  auto flawed = load_flawed(kFixtures / "flawed.json");
  auto factory = [](std::shared_ptr<std::map<std::string, CaseScript>> scripts) -> BackendFactory {
    return [scripts](const QueryCase& c) -> std::unique_ptr<ChatClient> { return testing::scripted(scripts->at(c.id)); };
  };
  auto gold_report = run_suite(suite, kFixtures, factory(std::make_shared<std::map<std::string, CaseScript>>(gold)));
  const std::vector<std::string> groups = {"artwork", "rotowire", "single", "multi", "value", "table", "plot", "all"};
  std::vector<std::string> got;
  for (const auto& g : gold_report.groups) {
    got.push_back(g.group);
    if (g.cases == 0 || g.logical != g.cases || g.physical != g.cases) v.fail(g.group + " below 100%");
  }
  if (got != groups) v.fail("groups are " + join(got));
  auto table = gold_report.render_table();
  for (const char* title : {"Artwork overall", "Rotowire overall", "Single modality", "Multiple modalities",
                            "Single value", "Table", "Plot", "All"}) {
    if (table.find(title) == std::string::npos) v.fail(std::string("table lacks ") + title);
  }

  auto mixed = gold;
  std::map<FailureCategory, std::size_t> injected;
  for (const auto& [id, f] : flawed) {
    mixed[id] = f.script;
    ++injected[f.category];
  }
  injected[FailureCategory::kCorrect] = suite.size() - flawed.size();
  auto flawed_report = run_suite(suite, kFixtures, factory(std::make_shared<std::map<std::string, CaseScript>>(mixed)));
  for (auto cat : all_categories()) {
    auto want = injected.count(cat) ? injected.at(cat) : 0;
    auto have = flawed_report.categories.count(cat) ? flawed_report.categories.at(cat) : 0;
    if (want != have)
      v.fail(std::string(to_string(cat)) + ": " + std::to_string(have) + " instead of " + std::to_string(want));
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"worked queries replay to their operator sequences", worked_queries},
      {"engine answers match the oracle for every case", engine_matches_oracle},
      {"random SQL matches the reference evaluator", sql_campaign},
      {"non-SELECT statements are rejected", security_guard},
      {"century UDF goldens and NULL handling", udf_goldens},
      {"injected faults are recovered", recovery},
      {"CLI replay is byte-identical across runs", cli_replay_determinism},
      {"report groups and failure counts", report_shape}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
    if (!v.ok) std::cout << " (" << v.detail << ")";
    std::cout << std::endl;
    failed += v.ok ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
