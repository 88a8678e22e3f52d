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


// Random SQL-subset queries with a nested-loop reference evaluator.
//
// The generator builds its own small expression trees and renders them to
// SQL text; the reference evaluator interprets the same trees with plain
// loops. Nothing here calls into the SQL engine.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/environment.hpp"
#include "common/value.hpp"

namespace lakeq::testing {

struct RandomSqlCase {
  std::string sql;
  Environment env;
  std::vector<Row> expected;
  bool ordered = false;  // compare as a sequence instead of a multiset
};

// Deterministic for a given seed.
RandomSqlCase random_sql_case(std::uint64_t seed);

// Multiset (or sequence) comparison with a small relative tolerance on
// numbers. Returns an explanation on mismatch.
std::optional<std::string> compare_rows(const std::vector<Row>& expected, const std::vector<Row>& actual,
                                        bool ordered);

struct SqlCampaign {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  std::size_t errors = 0;
  std::vector<std::string> failures;  // first few, for diagnostics
};

// Runs `count` random cases from `seed` against the engine.
SqlCampaign run_sql_campaign(std::uint64_t seed, std::size_t count);

}  // namespace lakeq::testing
