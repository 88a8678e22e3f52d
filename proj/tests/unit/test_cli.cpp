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


#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = LAKEQ_DATA_DIR;
const fs::path kFixtures = kData / "fixtures";
const char* kCli = LAKEQ_CLI_PATH;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

class Scratch {
 public:
  Scratch() : path_(fs::temp_directory_path() / ("lakeq_cli_" + std::to_string(::getpid()) + "_" + std::to_string(next_++))) {
    fs::create_directories(path_);
  }
  ~Scratch() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int next_ = 0;
  fs::path path_;
};

Run run(const std::string& args) {
  Scratch s;
  auto err = s.path() / "stderr";
  std::string cmd = std::string(kCli) + " " + args + " 2>" + quote(err.string());
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string gold_script_file(const fs::path& dir, const std::string& id) {
  auto path = dir / (id + ".json");
  std::ofstream(path) << json::parse(slurp(kFixtures / "gold.json")).at(id).dump();
  return path.string();
}

const std::string kQ2 = "Plot the maximum number of swords depicted on the paintings of each century.";

}  // namespace

TEST_CASE("no arguments is a usage error") { CHECK(run("").code == 2); }

TEST_CASE("unknown options are usage errors") {
  CHECK(run("catalog --bogus " + quote(kFixtures / "artwork")).code == 2);
  CHECK(run("bench " + quote(kFixtures)).code == 2);
}

TEST_CASE("catalog prints valid JSON") {
  auto r = run("catalog --format json " + quote((kFixtures / "artwork").string()));
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).dump().find("paintings") != std::string::npos);
  auto missing = run("catalog /nonexistent/lake");
  CHECK(missing.code == 1);
  CHECK(!missing.err.empty());
}

TEST_CASE("a scripted plot query writes its artifacts") {
  Scratch s;
  auto script = gold_script_file(s.path(), "artwork-21");
  auto r = run("query --format json --script " + quote(script) + " --datasets paintings --no-prune --out-dir " +
               quote(s.path().string()) + " " + quote((kFixtures / "artwork").string()) + " " + quote(kQ2));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto j = json::parse(r.out);
  CHECK(j.at("status") == "ok");
  CHECK(j.at("kind") == "plot");
  CHECK(j.at("operators") == json::array({"udf_transform", "visual_qa", "sql", "plot"}));
  CHECK(j.at("digest") == "806b5aae80291a3f862e55210a9fb667755b85886ed613af4dd1be03bcaf83bf");
  REQUIRE(fs::exists(s.path() / "plot.json"));
  REQUIRE(fs::exists(s.path() / "plot.svg"));
  CHECK(json::parse(slurp(s.path() / "plot.json")).at("kind") == "bar");
  CHECK(slurp(s.path() / "plot.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("scripted runs record a transcript that replays") {
  Scratch s;
  auto script = gold_script_file(s.path(), "artwork-21");
  auto transcript = (s.path() / "t.jsonl").string();
  auto lake = quote((kFixtures / "artwork").string());
  auto common = " --datasets paintings --no-prune --out-dir " + quote(s.path().string()) + " " + lake + " " + quote(kQ2);
  auto rec = run("query --script " + quote(script) + " --record " + quote(transcript) + common);
  REQUIRE_MESSAGE(rec.code == 0, rec.err);
  CHECK(slurp(transcript) == slurp(kData / "transcripts" / "artwork-21.jsonl"));
  auto rep = run("replay --transcript " + quote(transcript) + common);
  REQUIRE_MESSAGE(rep.code == 0, rep.err);
  CHECK(rep.out == rec.out);
}

TEST_CASE("replay rejects a live backend and recording") {
  auto t = quote((kData / "transcripts" / "artwork-21.jsonl").string());
  auto lake = quote((kFixtures / "artwork").string());
  CHECK(run("replay --backend remote --transcript " + t + " " + lake + " " + quote(kQ2)).code == 2);
  CHECK(run("replay " + lake + " " + quote(kQ2)).code == 2);
  CHECK(run("query --backend replay --record /tmp/x.jsonl --transcript " + t + " " + lake + " " + quote(kQ2)).code == 2);
}

TEST_CASE("a stale transcript fails and names the phase") {
  Scratch s;
  auto t = quote((kData / "transcripts" / "artwork-21.jsonl").string());
  auto r = run("replay --format json --transcript " + t + " --datasets paintings --no-prune --out-dir " +
               quote(s.path().string()) + " " + quote((kFixtures / "artwork").string()) +
               " " + quote("How many paintings depict a dog?"));
  CHECK(r.code == 1);
  CHECK(r.err.find("planning") != std::string::npos);
  auto j = json::parse(r.out);
  CHECK(j.at("status") == "error");
  CHECK(j.at("code") == "replay_miss");
}

TEST_CASE("bench over transcripts prints a JSON report") {
  auto r = run("bench --format json --suite " + quote((kFixtures / "suite.json").string()) + " --transcripts " +
               quote((kData / "transcripts").string()) + " " + quote(kFixtures.string()));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto j = json::parse(r.out);
  REQUIRE(j.at("groups").size() == 8);
  for (const auto& g : j.at("groups")) CHECK(g.at("physical_pct") == 100.0);
}

TEST_CASE("fixtures are reproducible from the CLI") {
  Scratch s;
  auto r = run("fixtures --format json --seed 7 " + quote(s.path().string()));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  json parsed;
  CHECK_NOTHROW(parsed = json::parse(r.out));
  for (const char* f : {"suite.json", "gold.json", "flawed.json", "artwork/paintings.csv"}) {
    CAPTURE(f);
    CHECK(slurp(s.path() / f) == slurp(kFixtures / f));
  }
}
