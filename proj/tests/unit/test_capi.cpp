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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "lakeq/lakeq.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = LAKEQ_DATA_DIR;
const fs::path kFixtures = kData / "fixtures";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  lakeq_string_free(s);
  return out;
}

std::string gold_script(const std::string& id) { return json::parse(slurp(kFixtures / "gold.json")).at(id).dump(); }

struct Handles {
  lakeq_catalog* catalog = nullptr;
  lakeq_llm* llm = nullptr;
  lakeq_qa* qa = nullptr;
  lakeq_outcome* outcome = nullptr;
  ~Handles() {
    lakeq_outcome_free(outcome);
    lakeq_qa_free(qa);
    lakeq_llm_free(llm);
    lakeq_catalog_free(catalog);
  }
};

}  // namespace

TEST_CASE("null arguments are rejected with a message") {
  lakeq_catalog* catalog = nullptr;
  CHECK(lakeq_catalog_open(nullptr, &catalog) == LAKEQ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(lakeq_last_error()).size() > 0);
  CHECK(lakeq_catalog_open((kFixtures / "artwork").c_str(), nullptr) == LAKEQ_ERR_INVALID_ARGUMENT);
  lakeq_llm* llm = nullptr;
  CHECK(lakeq_llm_scripted_json(nullptr, &llm) == LAKEQ_ERR_INVALID_ARGUMENT);
  CHECK(lakeq_query(nullptr, nullptr, nullptr, "q", nullptr, nullptr) == LAKEQ_ERR_INVALID_ARGUMENT);
  CHECK(lakeq_bench_run(nullptr, nullptr, nullptr) == LAKEQ_ERR_INVALID_ARGUMENT);
  // Freeing null handles is a no-op.
  lakeq_catalog_free(nullptr);
  lakeq_llm_free(nullptr);
  lakeq_qa_free(nullptr);
  lakeq_outcome_free(nullptr);
  lakeq_string_free(nullptr);
}

TEST_CASE("failures map to their status class") {
  lakeq_catalog* catalog = nullptr;
  CHECK(lakeq_catalog_open("/nonexistent/lake", &catalog) == LAKEQ_ERR_IO);
  CHECK(catalog == nullptr);
  lakeq_llm* llm = nullptr;
  CHECK(lakeq_llm_scripted_json("{not json", &llm) == LAKEQ_ERR_PARSE);
  CHECK(lakeq_llm_replay("/nonexistent/t.jsonl", &llm) == LAKEQ_ERR_IO);
}

TEST_CASE("status names are stable") {
  CHECK(std::string(lakeq_status_name(LAKEQ_OK)) == "ok");
  CHECK(std::string(lakeq_status_name(LAKEQ_ERR_SECURITY)) == "security");
  CHECK(std::string(lakeq_status_name(LAKEQ_ERR_REPLAY_MISS)) == "replay_miss");
  CHECK(std::string(lakeq_status_name(LAKEQ_ERR_QUERY_FAILED)) == "query_failed");
  CHECK(std::string(lakeq_status_name(static_cast<lakeq_status>(99))) == "unknown");
  CHECK(std::string(lakeq_version()).size() > 0);
}

TEST_CASE("catalog describe lists the tables") {
  Handles h;
  REQUIRE(lakeq_catalog_open((kFixtures / "artwork").c_str(), &h.catalog) == LAKEQ_OK);
  char* out = nullptr;
  REQUIRE(lakeq_catalog_describe(h.catalog, 1, &out) == LAKEQ_OK);
  auto j = json::parse(take(out));
  CHECK(j.dump().find("paintings") != std::string::npos);
  REQUIRE(lakeq_catalog_describe(h.catalog, 0, &out) == LAKEQ_OK);
  CHECK(take(out).find("paintings") != std::string::npos);
}

TEST_CASE("a scripted plot query exposes its outcome") {
  Handles h;
  REQUIRE(lakeq_catalog_open((kFixtures / "artwork").c_str(), &h.catalog) == LAKEQ_OK);
  REQUIRE(lakeq_llm_scripted_json(gold_script("artwork-21").c_str(), &h.llm) == LAKEQ_OK);
  REQUIRE(lakeq_qa_fixture(h.catalog, &h.qa) == LAKEQ_OK);
  lakeq_query_options o;
  lakeq_query_options_init(&o);
  o.datasets = "paintings";
  o.prune = 0;
  const char* q = "Plot the maximum number of swords depicted on the paintings of each century.";
  REQUIRE(lakeq_query(h.catalog, h.llm, h.qa, q, &o, &h.outcome) == LAKEQ_OK);
  CHECK(lakeq_outcome_status(h.outcome) == LAKEQ_OK);
  CHECK(std::string(lakeq_outcome_kind(h.outcome)) == "plot");
  CHECK(std::string(lakeq_outcome_operators(h.outcome)) == "udf_transform,visual_qa,sql,plot");
  CHECK(std::string(lakeq_outcome_digest(h.outcome)) ==
        "806b5aae80291a3f862e55210a9fb667755b85886ed613af4dd1be03bcaf83bf");
  auto plot = json::parse(lakeq_outcome_plot_json(h.outcome));
  CHECK(plot.at("kind") == "bar");
  CHECK(std::string(lakeq_outcome_plot_svg(h.outcome)).rfind("<svg", 0) == 0);
  CHECK(json::parse(lakeq_outcome_trace_json(h.outcome)).is_object());
  CHECK(std::string(lakeq_outcome_explain(h.outcome)).size() > 0);
  CHECK(std::string(lakeq_outcome_result_text(h.outcome)).find("bar plot") != std::string::npos);
}

TEST_CASE("a failed query still returns an outcome") {
  Handles h;
  REQUIRE(lakeq_catalog_open((kFixtures / "artwork").c_str(), &h.catalog) == LAKEQ_OK);
  REQUIRE(lakeq_llm_scripted_json("{\"planning\":[]}", &h.llm) == LAKEQ_OK);
  REQUIRE(lakeq_qa_fixture(h.catalog, &h.qa) == LAKEQ_OK);
  lakeq_query_options o;
  lakeq_query_options_init(&o);
  o.datasets = "paintings";
  auto st = lakeq_query(h.catalog, h.llm, h.qa, "How many paintings are there?", &o, &h.outcome);
  CHECK(st != LAKEQ_OK);
  REQUIRE(h.outcome != nullptr);
  CHECK(lakeq_outcome_status(h.outcome) == st);
  CHECK(std::string(lakeq_outcome_error(h.outcome)).size() > 0);
  CHECK(std::string(lakeq_outcome_kind(h.outcome)).empty());
  CHECK(std::string(lakeq_outcome_digest(h.outcome)).empty());
}

TEST_CASE("a replayed transcript reproduces the recorded answer") {
  Handles h;
  REQUIRE(lakeq_catalog_open((kFixtures / "rotowire").c_str(), &h.catalog) == LAKEQ_OK);
  REQUIRE(lakeq_llm_replay((kData / "transcripts" / "rotowire-17.jsonl").c_str(), &h.llm) == LAKEQ_OK);
  REQUIRE(lakeq_qa_fixture(h.catalog, &h.qa) == LAKEQ_OK);
  auto suite = json::parse(slurp(kFixtures / "suite.json"));
  json c;
  for (const auto& x : suite)
    if (x.at("id") == "rotowire-17") c = x;
  REQUIRE(c.is_object());
  std::string datasets;
  for (const auto& d : c.at("datasets")) datasets += (datasets.empty() ? "" : ",") + d.get<std::string>();
  lakeq_query_options o;
  lakeq_query_options_init(&o);
  o.datasets = datasets.c_str();
  o.prune = 0;
  REQUIRE(lakeq_query(h.catalog, h.llm, h.qa, c.at("query").get<std::string>().c_str(), &o, &h.outcome) == LAKEQ_OK);
  CHECK(std::string(lakeq_outcome_operators(h.outcome)) == "sql,text_qa,sql");
  CHECK(std::string(lakeq_outcome_digest(h.outcome)) == c.at("gold_digest").get<std::string>());
}

TEST_CASE("recording and saving a transcript") {
  Handles h;
  REQUIRE(lakeq_catalog_open((kFixtures / "artwork").c_str(), &h.catalog) == LAKEQ_OK);
  lakeq_llm* inner = nullptr;
  REQUIRE(lakeq_llm_scripted_json(gold_script("artwork-21").c_str(), &inner) == LAKEQ_OK);
  REQUIRE(lakeq_llm_recorder(inner, &h.llm) == LAKEQ_OK);
  REQUIRE(lakeq_qa_fixture(h.catalog, &h.qa) == LAKEQ_OK);
  lakeq_query_options o;
  lakeq_query_options_init(&o);
  o.datasets = "paintings";
  o.prune = 0;
  REQUIRE(lakeq_query(h.catalog, h.llm, h.qa,
                      "Plot the maximum number of swords depicted on the paintings of each century.", &o,
                      &h.outcome) == LAKEQ_OK);
  auto path = fs::temp_directory_path() / ("lakeq_capi_" + std::to_string(::getpid()) + ".jsonl");
  REQUIRE(lakeq_llm_save_transcript(h.llm, path.c_str()) == LAKEQ_OK);
  CHECK(slurp(path) == slurp(kData / "transcripts" / "artwork-21.jsonl"));
  fs::remove(path);
  // A plain client is not a recorder.
  CHECK(lakeq_llm_save_transcript(inner, path.c_str()) == LAKEQ_ERR_INVALID_ARGUMENT);
  lakeq_llm_free(h.llm);
  h.llm = nullptr;
  lakeq_llm_free(inner);
}

TEST_CASE("the bench runs over the shipped transcripts") {
  lakeq_bench_options o;
  lakeq_bench_options_init(&o);
  auto root = kFixtures.string();
  auto suite = (kFixtures / "suite.json").string();
  auto transcripts = (kData / "transcripts").string();
  o.fixtures_root = root.c_str();
  o.suite_path = suite.c_str();
  o.transcript_dir = transcripts.c_str();
  char* report = nullptr;
  char* text = nullptr;
  REQUIRE(lakeq_bench_run(&o, &report, &text) == LAKEQ_OK);
  auto j = json::parse(take(report));
  CHECK(take(text).find("All") != std::string::npos);
  REQUIRE(j.at("groups").size() == 8);
  for (const auto& g : j.at("groups")) CHECK(g.at("physical_pct") == 100.0);

  o.record_dir = "/tmp";
  CHECK(lakeq_bench_run(&o, nullptr, nullptr) == LAKEQ_ERR_INVALID_ARGUMENT);
}
