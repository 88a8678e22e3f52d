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


#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "bench/bench.hpp"
#include "bench/fixture_data.hpp"
#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "operators/operators.hpp"

namespace fs = std::filesystem;

namespace lakeq::bench {
namespace detail {
namespace {

// Raw engine outputs only: the standard distributions are not portable
// across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 gen_;
};

const std::vector<std::string> kTitles = {
    "The Annunciation",       "Madonna of the Meadow",   "Battle of the Bridge",
    "The Night Watchman",     "Harvest at Dawn",         "Portrait of a Merchant",
    "Still Life with Lemons", "The Siege",               "Saint George and the Dragon",
    "River Landscape",        "The Card Players",        "Lady with a Fan",
    "Winter Hunt",            "The Supper at Emmaus",    "Coronation of the Virgin",
    "Storm at Sea",           "The Duel",                "Garden Party",
    "The Crusader",           "Morning in the Village",  "Adoration of the Magi",
    "The Cavalry Charge",     "Portrait of a Young Knight", "Flowers in a Vase",
    "The Return of the Fishermen", "Mountain Pass",      "Holy Family",
    "Judith and Holofernes",  "The Market Square",       "Evening Prayer",
};

const std::vector<std::string> kGenres = {"religious art", "portrait", "landscape",
                                          "history painting", "still life"};

std::string movement_for(int century, Rng& rng) {
  switch (century) {
    case 15: return "Early Renaissance";
    case 16: return "High Renaissance";
    case 17: return "Baroque";
    case 18: return "Rococo";
    case 19: return rng.below(2) ? "Romanticism" : "Impressionism";
    default: return rng.below(2) ? "Expressionism" : "Cubism";
  }
}

std::vector<Painting> make_paintings(Rng& rng) {
  constexpr int kCount = 24;
  auto titles = kTitles;
  rng.shuffle(titles);
  std::vector<Painting> out;
  for (int i = 0; i < kCount; ++i) {
    Painting p;
    int century = 15 + i % 6;
    p.inception = (century - 1) * 100 + rng.between(1, 100);
    p.movement = movement_for(century, rng);
    p.genre = rng.pick(kGenres);
    out.push_back(std::move(p));
  }
  rng.shuffle(out);
  for (int i = 0; i < kCount; ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.title = titles[static_cast<std::size_t>(i)];
    char name[32];
    std::snprintf(name, sizeof name, "painting_%02d.ppm", i + 1);
    p.file = name;
    if (p.genre == "history painting") {
      p.swords = rng.between(1, 4);
      p.horse = rng.below(2) == 0;
      p.people = rng.between(3, 9);
    } else if (p.genre == "religious art") {
      p.swords = rng.between(0, 1);
      p.madonna = rng.below(3) != 0;
      p.people = rng.between(2, 6);
    } else if (p.genre == "portrait") {
      p.swords = rng.between(0, 1);
      p.horse = rng.below(5) == 0;
      p.people = 1;
    } else if (p.genre == "landscape") {
      p.horse = rng.below(3) == 0;
      p.people = rng.between(0, 2);
    }
  }
  // Floors that keep every suite query non-degenerate.
  auto count = [&](auto pred) { return std::count_if(out.begin(), out.end(), pred); };
  for (auto& p : out) {
    if (count([](const Painting& q) { return q.madonna; }) >= 3) break;
    if (!p.madonna && p.swords == 0) {
      p.genre = "religious art";
      p.madonna = true;
      p.people = std::max(p.people, 2);
    }
  }
  for (auto& p : out) {
    if (count([](const Painting& q) { return q.swords > 2; }) >= 2) break;
    if (p.genre == "history painting" && p.swords <= 2) p.swords = 3;
  }
  for (auto& p : out) {
    if (count([](const Painting& q) { return q.horse; }) >= 3) break;
    if (!p.horse && !p.madonna) p.horse = true;
  }
  std::set<int> centuries;
  for (const auto& p : out) centuries.insert((p.inception - 1) / 100 + 1);
  if (centuries.size() < 2) fail(ErrorKind::kInternal, "fixture paintings span fewer than two centuries");
  return out;
}

std::vector<Team> make_teams() {
  return {
      {"Heat", "Miami", "Eastern", "Southeast", 1988, "Bayfront Arena", "Rosa Delgado", 3},
      {"Celtics", "Boston", "Eastern", "Atlantic", 1946, "Harbor Garden", "Liam Walsh", 18},
      {"Knicks", "New York", "Eastern", "Atlantic", 1946, "Midtown Garden", "Dana Brooks", 2},
      {"Bulls", "Chicago", "Eastern", "Central", 1966, "Lakeside Center", "Victor Hale", 6},
      {"Lakers", "Los Angeles", "Western", "Pacific", 1947, "Sunset Arena", "Maya Chen", 17},
      {"Warriors", "San Francisco", "Western", "Pacific", 1946, "Bay Center", "Owen Price", 7},
  };
}

std::vector<Player> make_players(const std::vector<Team>& teams, Rng& rng) {
  const std::vector<std::string> first = {"Marcus", "Andre", "Luka", "Tyrese", "Jalen", "Nikola",
                                          "Darius", "Kevin", "Rudy", "Pascal", "Jonas", "Evan"};
  const std::vector<std::string> last = {"Okafor", "Brennan", "Novak", "Hart", "Silva", "Duarte",
                                         "Kowalski", "Moreau", "Tanaka", "Lindqvist", "Adeyemi", "Park"};
  const std::vector<std::string> positions = {"Guard", "Forward", "Center"};
  const std::vector<std::string> nations = {"USA", "France", "Canada", "Serbia", "Spain", "Australia",
                                            "Germany"};
  std::set<std::string> used;
  std::vector<Player> out;
  for (const auto& t : teams) {
    for (const auto& pos : positions) {
      Player p;
      do {
        p.name = rng.pick(first) + " " + rng.pick(last);
      } while (!used.insert(p.name).second);
      p.team = t.name;
      p.position = pos;
      p.height_cm = pos == "Guard" ? rng.between(183, 198) : pos == "Forward" ? rng.between(196, 208)
                                                                               : rng.between(205, 221);
      p.nationality = rng.pick(nations);
      p.birth_year = rng.between(1988, 2002);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Game> make_games(const std::vector<Team>& teams, const std::vector<Player>& players,
                             Rng& rng) {
  constexpr int kCount = 12;
  std::vector<std::size_t> order(teams.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  auto top_of = [&](const std::string& team) {
    std::vector<const Player*> roster;
    for (const auto& p : players) {
      if (p.team == team) roster.push_back(&p);
    }
    return rng.pick(roster)->name;
  };
  std::vector<Game> out;
  for (int i = 0; i < kCount; ++i) {
    Game g;
    char id[16];
    std::snprintf(id, sizeof id, "game_%02d", i + 1);
    g.id = id;
    std::size_t h, a;
    if (static_cast<std::size_t>(i) * 2 + 1 < order.size()) {
      // Every team plays at least once.
      h = order[static_cast<std::size_t>(i) * 2];
      a = order[static_cast<std::size_t>(i) * 2 + 1];
    } else {
      h = rng.below(teams.size());
      a = (h + 1 + rng.below(teams.size() - 1)) % teams.size();
    }
    g.home = teams[h].name;
    g.away = teams[a].name;
    g.home_points = rng.between(88, 130);
    g.away_points = rng.between(88, 130);
    if (g.away_points == g.home_points) ++g.away_points;
    g.home_rebounds = rng.between(30, 55);
    g.away_rebounds = rng.between(30, 55);
    g.home_top = top_of(g.home);
    g.away_top = top_of(g.away);
    g.home_top_points = rng.between(18, 40);
    g.away_top_points = rng.between(18, 40);
    out.push_back(std::move(g));
  }
  return out;
}

std::string ppm_stub(Rng& rng) {
  std::string s = "P3\n2 2\n255\n";
  for (int px = 0; px < 4; ++px) {
    s += std::to_string(rng.below(256)) + " " + std::to_string(rng.below(256)) + " " +
         std::to_string(rng.below(256)) + "\n";
  }
  return s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string report_text(const Game& g, const std::vector<Team>& teams) {
  const auto& arena = std::find_if(teams.begin(), teams.end(), [&](const Team& t) {
                        return t.name == g.home;
                      })->arena;
  bool home_won = g.home_points > g.away_points;
  int w = std::max(g.home_points, g.away_points), l = std::min(g.home_points, g.away_points);
  const auto& wtop = home_won ? g.home_top : g.away_top;
  const auto& ltop = home_won ? g.away_top : g.home_top;
  int wtp = home_won ? g.home_top_points : g.away_top_points;
  int ltp = home_won ? g.away_top_points : g.home_top_points;
  std::string s;
  s += "The " + g.home + " hosted the " + g.away + " at " + arena + ". ";
  s += "The " + g.winner() + " won " + std::to_string(w) + "-" + std::to_string(l) + ".\n";
  s += wtop + " led the " + g.winner() + " with " + std::to_string(wtp) + " points, while " + ltop +
       " scored " + std::to_string(ltp) + " for the " + g.loser() + ".\n";
  s += "The " + g.home + " collected " + std::to_string(g.home_rebounds) + " rebounds and the " + g.away +
       " finished with " + std::to_string(g.away_rebounds) + ".\n";
  return s;
}

}  // namespace

FixtureData generate_data(std::uint64_t seed) {
  Rng rng(seed);
  FixtureData d;
  d.paintings = make_paintings(rng);
  d.teams = make_teams();
  d.players = make_players(d.teams, rng);
  d.games = make_games(d.teams, d.players, rng);
  return d;
}

std::map<std::string, std::string> render_files(const FixtureData& d) {
  std::map<std::string, std::string> files;
  using oj = nlohmann::ordered_json;

  // artwork
  oj art = oj::array();
  art.push_back({{"name", "paintings"},
                 {"kind", "table"},
                 {"path", "paintings.csv"},
                 {"columns", oj::array({{{"name", "image"}, {"type", "IMAGE"}}})}});
  art.push_back({{"name", "painting_images"}, {"kind", "image_collection"}, {"path", "images"}});
  files["artwork/catalog.json"] = art.dump(2) + "\n";

  std::vector<csv::Record> rows = {{"title", "inception", "movement", "genre", "image"}};
  oj ann = oj::object();
  Rng pixels(0x5eed);
  for (const auto& p : d.paintings) {
    rows.push_back({p.title, std::to_string(p.inception), p.movement, p.genre, "images/" + p.file});
    files["artwork/images/" + p.file] = ppm_stub(pixels);
    oj a = oj::object();
    a[kSwordsQuestion] = std::to_string(p.swords);
    a[kMadonnaQuestion] = yes_no(p.madonna);
    a[kHorseQuestion] = yes_no(p.horse);
    a[kPeopleQuestion] = std::to_string(p.people);
    a[image_select_question(kMadonnaDescription)] = yes_no(p.madonna);
    a[image_select_question(kHorseDescription)] = yes_no(p.horse);
    ann[p.file] = std::move(a);
  }
  files["artwork/paintings.csv"] = csv::write(rows);
  files["artwork/images/annotations.json"] = ann.dump(2) + "\n";

  // rotowire
  oj roto = oj::array();
  roto.push_back({{"name", "teams"}, {"kind", "table"}, {"path", "teams.csv"}});
  roto.push_back({{"name", "players"}, {"kind", "table"}, {"path", "players.csv"}});
  roto.push_back({{"name", "game_reports"},
                  {"kind", "text_collection"},
                  {"path", "reports"},
                  {"columns", oj::array({{{"name", "game_id"}, {"type", "TEXT"}},
                                         {{"name", "report"}, {"type", "DOCUMENT"}}})}});
  files["rotowire/catalog.json"] = roto.dump(2) + "\n";

  rows = {{"name", "city", "conference", "division", "founded", "arena", "head_coach", "championships"}};
  for (const auto& t : d.teams) {
    rows.push_back({t.name, t.city, t.conference, t.division, std::to_string(t.founded), t.arena,
                    t.head_coach, std::to_string(t.championships)});
  }
  files["rotowire/teams.csv"] = csv::write(rows);

  rows = {{"name", "team", "position", "height_cm", "nationality", "birth_year"}};
  for (const auto& p : d.players) {
    rows.push_back({p.name, p.team, p.position, std::to_string(p.height_cm), p.nationality,
                    std::to_string(p.birth_year)});
  }
  files["rotowire/players.csv"] = csv::write(rows);

  ann = oj::object();
  for (const auto& g : d.games) {
    files["rotowire/reports/" + g.id + ".txt"] = report_text(g, d.teams);
    oj a = oj::object();
    for (const auto* side : {&g.home, &g.away}) {
      bool home = side == &g.home;
      const auto& t = *side;
      a["How many points did " + t + " score?"] = std::to_string(home ? g.home_points : g.away_points);
      a["Did " + t + " win the game?"] = yes_no(g.winner() == t);
      a["Did " + t + " lose the game?"] = yes_no(g.loser() == t);
      a["How many rebounds did " + t + " have?"] = std::to_string(home ? g.home_rebounds : g.away_rebounds);
    }
    a[kWinnerQuestion] = g.winner();
    a[kTotalPointsQuestion] = std::to_string(g.home_points + g.away_points);
    a[kWinnerPointsQuestion] = std::to_string(std::max(g.home_points, g.away_points));
    ann[g.id + ".txt"] = std::move(a);
  }
  files["rotowire/reports/annotations.json"] = ann.dump(2) + "\n";
  return files;
}

}  // namespace detail

FixtureSet build_fixtures(std::uint64_t seed) {
  auto data = detail::generate_data(seed);
  FixtureSet set;
  set.files = detail::render_files(data);
  FileReader read = [&](const std::string& rel) -> std::string {
    auto it = set.files.find(rel);
    if (it == set.files.end()) fail(ErrorKind::kIo, "fixture file '" + rel + "' was not generated");
    return it->second;
  };
  for (auto& entry : detail::build_suite(data)) {
    entry.c.gold_result = oracle_result(entry.c, read);
    entry.c.gold_digest = sha256_hex(entry.c.gold_result.dump());
    set.gold_scripts[entry.c.id] = std::move(entry.gold);
    if (entry.flawed) set.flawed[entry.c.id] = std::move(*entry.flawed);
    set.cases.push_back(std::move(entry.c));
  }
  set.files["suite.json"] = serialize_suite(set.cases);
  nlohmann::ordered_json gold = nlohmann::ordered_json::object();
  for (const auto& c : set.cases) gold[c.id] = set.gold_scripts.at(c.id);
  set.files["gold.json"] = gold.dump(2) + "\n";
  nlohmann::ordered_json flawed = nlohmann::ordered_json::object();
  for (const auto& c : set.cases) {
    auto it = set.flawed.find(c.id);
    if (it == set.flawed.end()) continue;
    flawed[c.id] = {{"category", to_string(it->second.category)}, {"script", it->second.script}};
  }
  set.files["flawed.json"] = flawed.dump(2) + "\n";
  return set;
}

void write_fixtures(const FixtureSet& set, const fs::path& out) {
  for (const auto& [rel, bytes] : set.files) {
    auto path = out / rel;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::kIo, "cannot create " + path.parent_path().string() + ": " + ec.message());
    write_file(path, bytes);
  }
}

namespace {

nlohmann::json read_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace

std::map<std::string, CaseScript> load_scripts(const fs::path& path) {
  auto j = read_json_file(path);
  if (!j.is_object()) fail(ErrorKind::kParse, path.string() + ": expected an object keyed by case id");
  std::map<std::string, CaseScript> out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = CaseScript(it.value());
  return out;
}

std::map<std::string, FlawedCase> load_flawed(const fs::path& path) {
  auto j = read_json_file(path);
  if (!j.is_object()) fail(ErrorKind::kParse, path.string() + ": expected an object keyed by case id");
  std::map<std::string, FlawedCase> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (!v.is_object() || !v.contains("category") || !v["category"].is_string() || !v.contains("script")) {
      fail(ErrorKind::kParse, path.string() + ": case '" + it.key() + "' needs category and script");
    }
    auto cat = parse_failure_category(v["category"].get<std::string>());
    if (!cat) fail(ErrorKind::kParse, path.string() + ": unknown category '" + v["category"].get<std::string>() + "'");
    out[it.key()] = FlawedCase{*cat, CaseScript(v["script"])};
  }
  return out;
}

}  // namespace lakeq::bench
