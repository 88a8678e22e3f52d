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


#include <cmath>

#include "doctest.h"
#include "sql/sql.hpp"
#include "sql_oracle.hpp"
#include "support.hpp"

using namespace lakeq;

namespace {

Environment people() {
  Environment env;
  env.put("people", Relation({{"name", ColumnType::kText}, {"age", ColumnType::kNumber}, {"city", ColumnType::kText}},
                             {{std::string("Ana"), 34.0, std::string("Oslo")},
                              {std::string("Ben"), 19.0, std::string("Rome")},
                              {std::string("Cleo"), Cell{}, std::string("Oslo")},
                              {std::string("Dan"), 51.0, Cell{}},
                              {std::string("Eve"), 27.0, std::string("rome")}}));
  env.put("cities", Relation({{"city", ColumnType::kText}, {"country", ColumnType::kText}},
                             {{std::string("Oslo"), std::string("Norway")},
                              {std::string("Rome"), std::string("Italy")}}));
  env.put("raw", Relation({{"v", ColumnType::kText}}, {{std::string("12")},
                                                       {std::string("7.9")},
                                                       {std::string("-3.5")},
                                                       {std::string("n/a")},
                                                       {Cell{}}}));
  return env;
}

ErrorKind kind_of(const std::string& sql, const Environment& env) {
  try {
    sql::execute_sql(sql, env);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("statement was accepted: " << sql);
  return ErrorKind::kInternal;
}

}  // namespace

TEST_CASE("random queries agree with the nested-loop evaluator") {
  auto campaign = testing::run_sql_campaign(20260101, 1000);
  for (const auto& f : campaign.failures) MESSAGE(f);
  CHECK(campaign.cases == 1000);
  CHECK(campaign.mismatches == 0);
  CHECK(campaign.errors == 0);
}

TEST_CASE("random cases are reproducible from their seed") {
  auto a = testing::random_sql_case(99);
  auto b = testing::random_sql_case(99);
  CHECK(a.sql == b.sql);
  CHECK(a.expected == b.expected);
}

TEST_CASE("every statement of the mutation corpus is rejected by the guard") {
  auto corpus = testing::security_corpus();
  REQUIRE(corpus.size() >= 50);
  auto env = people();
  for (const auto& s : corpus) {
    CAPTURE(s);
    CHECK_THROWS_AS(sql::ensure_select_only(s), Error);
    CHECK(kind_of(s, env) == ErrorKind::kSecurity);
  }
}

TEST_CASE("the guard lets plain selects through") {
  auto env = people();
  CHECK_NOTHROW(sql::ensure_select_only("SELECT * FROM people"));
  CHECK_NOTHROW(sql::ensure_select_only("  select name from people"));
  CHECK_NOTHROW(sql::ensure_select_only("/* lead */ SELECT name FROM people"));
  auto r = sql::execute_sql("SELECT name FROM people WHERE city = 'x; DROP TABLE people'", env);
  CHECK(r.size() == 0);
}

TEST_CASE("binding, type and parse errors are told apart") {
  auto env = people();
  CHECK(kind_of("SELECT nope FROM people", env) == ErrorKind::kBinding);
  CHECK(kind_of("SELECT name FROM missing", env) == ErrorKind::kBinding);
  CHECK(kind_of("SELECT SUM(name) FROM people", env) == ErrorKind::kType);
  CHECK(kind_of("SELECT name FROM people WHERE", env) == ErrorKind::kParse);
  CHECK(kind_of("SELECT FROM people", env) == ErrorKind::kParse);
}

TEST_CASE("aggregates skip NULLs and groups come out in key order") {
  auto env = people();
  auto r = sql::execute_sql("SELECT city, COUNT(*) AS n, COUNT(age) AS known, AVG(age) AS mean FROM people GROUP BY city",
                            env);
  REQUIRE(r.size() == 4);
  // NULL < 'Oslo' < 'Rome' < 'rome' byte-wise.
  CHECK(is_null(r.rows()[0][0]));
  CHECK(r.rows()[1] == Row{std::string("Oslo"), 2.0, 1.0, 34.0});
  CHECK(r.rows()[2] == Row{std::string("Rome"), 1.0, 1.0, 19.0});
  CHECK(r.rows()[3][0] == Cell{std::string("rome")});
  auto empty = sql::execute_sql("SELECT SUM(age) AS s, COUNT(*) AS n FROM people WHERE age > 100", env);
  REQUIRE(empty.size() == 1);
  CHECK(is_null(empty.rows()[0][0]));
  CHECK(empty.rows()[0][1] == Cell{0.0});
}

TEST_CASE("CAST turns unreadable text into NULL and INTEGER truncates") {
  auto env = people();
  auto r = sql::execute_sql("SELECT CAST(v AS INTEGER) AS i, CAST(v AS REAL) AS d FROM raw", env);
  REQUIRE(r.size() == 5);
  CHECK(r.rows()[0] == Row{12.0, 12.0});
  CHECK(r.rows()[1] == Row{7.0, 7.9});
  CHECK(r.rows()[2] == Row{-3.0, -3.5});
  CHECK(is_null(r.rows()[3][0]));
  CHECK(is_null(r.rows()[3][1]));
  CHECK(is_null(r.rows()[4][0]));
}

TEST_CASE("ROUND, CASE, LIKE and BETWEEN") {
  auto env = people();
  auto r = sql::execute_sql("SELECT ROUND(AVG(age), 2) AS m FROM people", env);
  // (34 + 19 + 51 + 27) / 4 = 32.75
  CHECK(r.rows()[0][0] == Cell{32.75});
  r = sql::execute_sql("SELECT ROUND(10.5 / 4, 1) AS x FROM cities LIMIT 1", env);
  CHECK(r.rows()[0][0] == Cell{2.6});
  // Numbers carry no integer type: integral operands divide with truncation.
  r = sql::execute_sql("SELECT 10.0 / 4 AS x, -7 / 2 AS y FROM cities LIMIT 1", env);
  CHECK(r.rows()[0][0] == Cell{2.0});
  CHECK(r.rows()[0][1] == Cell{-3.0});
  r = sql::execute_sql("SELECT name FROM people WHERE city LIKE 'ROME'", env);
  CHECK(r.size() == 2);
  r = sql::execute_sql("SELECT name FROM people WHERE age BETWEEN 20 AND 40 ORDER BY name", env);
  REQUIRE(r.size() == 2);
  CHECK(r.rows()[0][0] == Cell{std::string("Ana")});
  r = sql::execute_sql("SELECT name, CASE WHEN age >= 30 THEN 'old' ELSE 'young' END AS band FROM people ORDER BY name",
                       env);
  CHECK(r.rows()[0][1] == Cell{std::string("old")});
  CHECK(r.rows()[1][1] == Cell{std::string("young")});
  CHECK(r.rows()[2][1] == Cell{std::string("young")});  // NULL age falls through to ELSE
}

TEST_CASE("joins, DISTINCT and ordering with NULLs") {
  auto env = people();
  auto r = sql::execute_sql(
      "SELECT p.name, c.country FROM people p JOIN cities c ON p.city = c.city ORDER BY p.name", env);
  REQUIRE(r.size() == 3);
  CHECK(r.rows()[2] == Row{std::string("Cleo"), std::string("Norway")});
  r = sql::execute_sql("SELECT DISTINCT city FROM people", env);
  CHECK(r.size() == 4);
  r = sql::execute_sql("SELECT name FROM people ORDER BY age DESC", env);
  CHECK(r.rows().front()[0] == Cell{std::string("Dan")});
  CHECK(r.rows().back()[0] == Cell{std::string("Cleo")});
  r = sql::execute_sql("SELECT COUNT(DISTINCT city) AS n FROM people", env);
  CHECK(r.rows()[0][0] == Cell{3.0});
}

TEST_CASE("tables a statement reads are listed in order") {
  auto stmt = sql::parse_select("SELECT * FROM people p CROSS JOIN cities, raw");
  CHECK(sql::referenced_tables(stmt) == std::vector<std::string>{"people", "cities", "raw"});
}

TEST_CASE("check_sql reports the output schema") {
  auto env = people();
  auto cols = sql::check_sql("SELECT city, COUNT(*) AS n FROM people GROUP BY city", env);
  REQUIRE(cols.size() == 2);
  CHECK(cols[0] == Column{"city", ColumnType::kText});
  CHECK(cols[1] == Column{"n", ColumnType::kNumber});
  CHECK_THROWS_AS(sql::check_sql("DELETE FROM people", env), Error);
}
