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


// Shared helpers for the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "catalog/catalog.hpp"
#include "engine/executor.hpp"
#include "json.hpp"
#include "llm/llm.hpp"

namespace lakeq::testing {

// Directory removed with everything in it on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline constexpr std::uint64_t kFixtureSeed = 7;

// Fixtures for kFixtureSeed, written once per process.
const std::filesystem::path& fixture_root();

// Scripted response bodies in the shapes the parsers expect.
std::string plan_text(const std::vector<std::string>& steps);
std::string mapping_text(const std::string& op, const nlohmann::ordered_json& args);
std::string udf_text(const std::string& expr);
std::string recovery_text(bool q3, bool q4, bool q5, bool q6, const std::string& cause = "a wrong argument");

std::unique_ptr<ScriptedChatClient> scripted(const nlohmann::ordered_json& script);

// Non-SELECT statements and disguised variants of them.
std::vector<std::string> security_corpus();

// Faults injected into an otherwise correct scripted run.
struct RecoveryScenario {
  std::string name;
  std::string query;
  std::vector<std::string> datasets;
  nlohmann::ordered_json script;        // fault plus the recovery conversation
  nlohmann::ordered_json clean_script;  // the same query without the fault
  BacktrackTarget target = BacktrackTarget::kPlanning;
  std::size_t plans = 1;                // plans parsed over the whole run
};

std::vector<RecoveryScenario> recovery_scenarios();

// Runs a scenario on the artwork fixture. Returns the problems found; empty
// means it recovered as expected.
std::vector<std::string> check_recovery(const RecoveryScenario& s, std::size_t max_retries = 3);

}  // namespace lakeq::testing
