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

// Generated fixture content shared by the file writer and the suite
// builder. The oracle does not see these structs; it reads the files.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bench/bench.hpp"

namespace lakeq::bench::detail {

inline constexpr const char* kSwordsQuestion = "How many swords are depicted?";
inline constexpr const char* kMadonnaQuestion = "Does this painting depict Madonna and Child?";
inline constexpr const char* kHorseQuestion = "Is there a horse in the image?";
inline constexpr const char* kPeopleQuestion = "How many people are depicted?";
inline constexpr const char* kMadonnaDescription = "Madonna and Child";
inline constexpr const char* kHorseDescription = "a horse";

inline constexpr const char* kWinnerQuestion = "Which team won the game?";
inline constexpr const char* kTotalPointsQuestion = "How many points were scored in total?";
inline constexpr const char* kWinnerPointsQuestion = "How many points did the winning team score?";

struct Painting {
  std::string title;
  int inception = 0;
  std::string movement;
  std::string genre;
  std::string file;  // file name inside images/
  int swords = 0;
  bool madonna = false;
  bool horse = false;
  int people = 0;
};

struct Team {
  std::string name;
  std::string city;
  std::string conference;
  std::string division;
  int founded = 0;
  std::string arena;
  std::string head_coach;
  int championships = 0;
};

struct Player {
  std::string name;
  std::string team;
  std::string position;
  int height_cm = 0;
  std::string nationality;
  int birth_year = 0;
};

struct Game {
  std::string id;  // game_01
  std::string home, away;
  int home_points = 0, away_points = 0;
  int home_rebounds = 0, away_rebounds = 0;
  std::string home_top, away_top;
  int home_top_points = 0, away_top_points = 0;

  const std::string& winner() const { return home_points > away_points ? home : away; }
  const std::string& loser() const { return home_points > away_points ? away : home; }
};

struct FixtureData {
  std::vector<Painting> paintings;
  std::vector<Team> teams;
  std::vector<Player> players;
  std::vector<Game> games;
};

FixtureData generate_data(std::uint64_t seed);
std::map<std::string, std::string> render_files(const FixtureData& data);

struct SuiteEntry {
  QueryCase c;  // gold result still empty
  CaseScript gold;
  std::optional<FlawedCase> flawed;
};

std::vector<SuiteEntry> build_suite(const FixtureData& data);

}  // namespace lakeq::bench::detail
