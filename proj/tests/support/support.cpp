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


#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <random>

#include "bench/bench.hpp"
#include "operators/operators.hpp"

namespace lakeq::testing {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("lakeq-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

const fs::path& fixture_root() {
  static TempDir dir;
  static bool written = [] {
    bench::write_fixtures(bench::build_fixtures(kFixtureSeed), dir.path());
    return true;
  }();
  (void)written;
  return dir.path();
}

std::string plan_text(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) out += "Step " + std::to_string(i + 1) + ": " + steps[i] + "\n";
  return out;
}

std::string mapping_text(const std::string& op, const json& args) {
  return "```json\n" + json{{"operator", op}, {"args", args}}.dump() + "\n```";
}

std::string udf_text(const std::string& expr) { return "```\n" + expr + "\n```"; }

std::string recovery_text(bool q3, bool q4, bool q5, bool q6, const std::string& cause) {
  auto yn = [](bool b) { return b ? "Yes" : "No"; };
  return "ANSWER (1): " + cause + "\nANSWER (2): Use the right argument.\nANSWER (3): " + yn(q3) +
         "\nANSWER (4): " + yn(q4) + "\nANSWER (5): " + yn(q5) + "\nANSWER (6): " + yn(q6) + "\n";
}

std::unique_ptr<ScriptedChatClient> scripted(const json& script) {
  return ScriptedChatClient::from_json(script.dump());
}

std::vector<std::string> security_corpus() {
  const std::vector<std::string> base = {
      "INSERT INTO paintings VALUES ('x', 1500)",
      "INSERT INTO paintings SELECT * FROM paintings",
      "UPDATE paintings SET title = 'x'",
      "UPDATE paintings SET inception = 0 WHERE 1 = 1",
      "DELETE FROM paintings",
      "DELETE FROM paintings WHERE title LIKE '%'",
      "DROP TABLE paintings",
      "DROP VIEW recent",
      "CREATE TABLE t (a INTEGER)",
      "CREATE VIEW recent AS SELECT * FROM paintings",
      "CREATE INDEX idx ON paintings (title)",
      "ALTER TABLE paintings ADD COLUMN x TEXT",
      "ALTER TABLE paintings RENAME TO p2",
      "TRUNCATE TABLE paintings",
      "REPLACE INTO paintings VALUES ('x', 1)",
      "MERGE INTO paintings USING t ON (1 = 1) WHEN MATCHED THEN DELETE",
      "UPSERT INTO paintings VALUES ('x', 1)",
      "ATTACH DATABASE 'x.db' AS x",
      "DETACH DATABASE x",
      "PRAGMA writable_schema = 1",
      "VACUUM",
      "REINDEX paintings",
      "GRANT ALL ON paintings TO PUBLIC",
      "REVOKE ALL ON paintings FROM PUBLIC",
      "BEGIN TRANSACTION",
      "COMMIT",
      "ROLLBACK",
      "SAVEPOINT s1",
      "SET search_path = other",
      "CALL cleanup()",
      "EXEC xp_cmdshell 'rm -rf /'",
      "COPY paintings TO '/tmp/out.csv'",
      "LOAD DATA INFILE 'x.csv' INTO TABLE paintings",
      "WITH doomed AS (SELECT title FROM paintings) DELETE FROM paintings",
      "LOCK TABLES paintings WRITE",
      "COMMENT ON TABLE paintings IS 'x'",
  };
  std::vector<std::string> out;
  auto add = [&](std::string s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  for (const auto& s : base) {
    std::string lower;
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    add(s);
    add(lower);
    add(" \n\t" + s + ";");
    add("/* harmless */ " + s);
    add("-- harmless\n" + s);
    add("SELECT * FROM paintings; " + s);
    add("SELECT title FROM paintings WHERE title = 'a';" + lower);
    add("(" + s + ")");
  }
  return out;
}

std::vector<RecoveryScenario> recovery_scenarios() {
  const std::string query = "How many paintings were created in each century?";
  const std::string plan = plan_text({"Compute the century of every painting from its inception year.",
                                      "Count the paintings per century."});
  const std::string century = udf_text("floor((inception - 1) / 100) + 1");
  const std::string udf_map = mapping_text(
      "udf_transform",
      {{"input", "paintings"}, {"description", "century of the painting from inception"}, {"out_column", "century"}});
  const std::string count_map =
      mapping_text("sql", {{"query", "SELECT century, COUNT(*) AS n FROM r1 GROUP BY century"}});
  const json clean = {{"planning", {plan}}, {"udf", {century}}, {"mapping", {udf_map, count_map}}};

  std::vector<RecoveryScenario> out;

  RecoveryScenario wrong_column;
  wrong_column.name = "wrong column";
  wrong_column.query = query;
  wrong_column.datasets = {"paintings"};
  wrong_column.clean_script = clean;
  wrong_column.script = {
      {"planning", {plan}},
      {"udf", {century}},
      {"mapping",
       {udf_map, mapping_text("sql", {{"query", "SELECT centuri, COUNT(*) AS n FROM r1 GROUP BY centuri"}}),
        count_map}},
      {"recovery", {recovery_text(false, false, false, true, "the column centuri does not exist")}}};
  wrong_column.target = BacktrackTarget::kMapping;
  wrong_column.plans = 1;
  out.push_back(wrong_column);

  RecoveryScenario wrong_operator;
  wrong_operator.name = "wrong operator";
  wrong_operator.query = query;
  wrong_operator.datasets = {"paintings"};
  wrong_operator.clean_script = clean;
  wrong_operator.script = {
      {"planning", {plan, plan}},
      {"udf", {century, century}},
      {"mapping",
       {udf_map,
        mapping_text("visual_qa", {{"input", "r1"},
                                   {"image_column", "century"},
                                   {"question", "How many paintings are there?"},
                                   {"out_column", "n"}}),
        udf_map, count_map}},
      {"recovery", {recovery_text(true, true, true, false, "visual_qa cannot count rows")}}};
  wrong_operator.target = BacktrackTarget::kPlanning;
  wrong_operator.plans = 2;
  out.push_back(wrong_operator);

  RecoveryScenario unparseable;
  unparseable.name = "unparseable plan";
  unparseable.query = query;
  unparseable.datasets = {"paintings"};
  unparseable.clean_script = clean;
  unparseable.script = {
      {"planning", {"I would first look at the paintings and then think about centuries.", plan}},
      {"udf", {century}},
      {"mapping", {udf_map, count_map}},
      {"recovery", {recovery_text(true, true, false, false, "the plan had no numbered steps")}}};
  unparseable.target = BacktrackTarget::kPlanning;
  unparseable.plans = 1;
  out.push_back(unparseable);

  return out;
}

std::vector<std::string> check_recovery(const RecoveryScenario& s, std::size_t max_retries) {
  std::vector<std::string> problems;
  auto catalog = load_catalog(fixture_root() / "artwork");
  FixtureQaBackend qa(catalog);
  QueryConfig config;
  config.datasets = s.datasets;
  config.prune = false;
  config.max_retries = max_retries;

  auto clean_llm = scripted(s.clean_script);
  auto clean = run_query(s.query, catalog, *clean_llm, qa, config);
  if (!clean.ok()) problems.push_back("clean run failed: " + clean.error);

  auto inner = scripted(s.script);
  RecordingChatClient recorder(*inner);
  auto outcome = run_query(s.query, catalog, recorder, qa, config);
  if (!outcome.ok()) {
    problems.push_back("did not recover: " + outcome.error);
    return problems;
  }
  if (clean.ok() && outcome.result->digest() != clean.result->digest()) {
    problems.push_back("recovered result differs from the fault-free run");
  }
  const auto& t = outcome.trace;
  if (t.recoveries.size() != 1) {
    problems.push_back("expected one recovery, saw " + std::to_string(t.recoveries.size()));
    return problems;
  }
  if (t.recoveries.size() > max_retries) problems.push_back("more recoveries than max_retries");
  const auto& event = t.recoveries.front();
  if (event.target != s.target) {
    problems.push_back(std::string("backtracked to ") + to_string(event.target) + ", expected " + to_string(s.target));
  }
  if (t.plans.size() != s.plans) {
    problems.push_back("expected " + std::to_string(s.plans) + " plans, saw " + std::to_string(t.plans.size()));
  }
  // The first request of the retried phase after the analysis must carry the
  // original error message verbatim.
  auto transcript = recorder.transcript();
  Phase retried = s.target == BacktrackTarget::kPlanning ? Phase::kPlanning : Phase::kMapping;
  bool after_recovery = false, checked = false;
  for (const auto& e : transcript.entries) {
    if (e.tag == Phase::kRecovery) {
      after_recovery = true;
      continue;
    }
    if (!after_recovery || e.tag != retried) continue;
    bool found = false;
    for (const auto& m : e.request_messages) found = found || m.content.find(event.error.message) != std::string::npos;
    if (!found) problems.push_back("retried prompt lacks the original error message");
    checked = true;
    break;
  }
  if (!checked) problems.push_back("no retried prompt after the error analysis");
  if (s.target == BacktrackTarget::kPlanning && outcome.result->physical_plan.size() != 2) {
    problems.push_back("steps from the abandoned plan leaked into the result");
  }
  return problems;
}

}  // namespace lakeq::testing
