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


// Reference answers for the bench suite. Everything here is computed with
// plain loops over the fixture files: nested loops for joins, map-based
// grouping and direct annotation lookups. Nothing from the query engine,
// the operators or the catalog loader is used.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "bench/bench.hpp"
#include "common/error.hpp"
#include "common/text.hpp"

namespace lakeq::bench {
namespace {

using oj = nlohmann::ordered_json;
using Row = std::map<std::string, std::string>;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::vector<Row> read_table(const FileReader& read, const std::string& rel) {
  std::vector<std::string> lines;
  std::string text = read(rel), cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  if (lines.empty()) fail(ErrorKind::kParse, "oracle: " + rel + " is empty");
  auto header = split_csv_line(lines[0]);
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    Row r;
    for (std::size_t c = 0; c < header.size() && c < fields.size(); ++c) r[header[c]] = fields[c];
    rows.push_back(std::move(r));
  }
  return rows;
}

class Annotations {
 public:
  Annotations(const FileReader& read, const std::string& rel) : json_(nlohmann::json::parse(read(rel))) {}

  std::string ask(const std::string& item, const std::string& question) const {
    auto it = json_.find(item);
    if (it == json_.end()) return "unknown";
    auto q = it->find(question);
    return q == it->end() ? "unknown" : q->get<std::string>();
  }

  std::vector<std::string> items() const {
    std::vector<std::string> out;
    for (auto it = json_.begin(); it != json_.end(); ++it) out.push_back(it.key());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  nlohmann::json json_;
};

std::optional<double> as_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') return std::nullopt;
  }
  return std::stod(s);
}

double year(const std::string& s) { return std::stod(s); }

oj number(double v) {
  if (v == std::trunc(v) && std::abs(v) < 1e15) return static_cast<long long>(v);
  return v;
}

double round2(double v) { return std::round(v * 100) / 100; }

oj scalar(oj v) { return {{"kind", "scalar"}, {"value", std::move(v)}}; }

oj table(const std::vector<std::pair<std::string, std::string>>& cols, const std::vector<std::vector<oj>>& rows) {
  if (rows.size() == 1 && cols.size() == 1) return scalar(rows[0][0]);
  oj j;
  j["kind"] = "table";
  j["columns"] = oj::array();
  for (const auto& [n, t] : cols) j["columns"].push_back({{"name", n}, {"type", t}});
  j["rows"] = oj::array();
  for (const auto& r : rows) j["rows"].push_back(r);
  return j;
}

// Keys are either all numbers or all text; std::map gives ascending order.
oj bar_plot(const std::string& x, const std::string& y, const std::string& title,
            const std::vector<std::pair<oj, oj>>& points) {
  auto sorted = points;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.first.is_number() && b.first.is_number()) return a.first.template get<double>() < b.first.template get<double>();
    return a.first.template get<std::string>() < b.first.template get<std::string>();
  });
  oj data = oj::array();
  for (const auto& [px, py] : sorted) data.push_back({px, py});
  return {{"kind", "plot"}, {"plot", {{"kind", "bar"}, {"x", x}, {"y", y}, {"title", title}, {"data", data}}}};
}

template <typename K>
std::vector<std::pair<oj, oj>> points_of(const std::map<K, double>& m) {
  std::vector<std::pair<oj, oj>> out;
  for (const auto& [k, v] : m) out.emplace_back(oj(k), number(v));
  return out;
}

int century(double inception) { return static_cast<int>(std::floor((inception - 1) / 100)) + 1; }

struct Artwork {
  std::vector<Row> paintings;
  Annotations images;
  explicit Artwork(const FileReader& read)
      : paintings(read_table(read, "artwork/paintings.csv")), images(read, "artwork/images/annotations.json") {}

  std::string ask(const Row& painting, const std::string& question) const {
    auto path = painting.at("image");
    auto slash = path.rfind('/');
    return images.ask(slash == std::string::npos ? path : path.substr(slash + 1), question);
  }
};

struct Rotowire {
  std::vector<Row> teams;
  std::vector<Row> players;
  Annotations reports;
  explicit Rotowire(const FileReader& read)
      : teams(read_table(read, "rotowire/teams.csv")),
        players(read_table(read, "rotowire/players.csv")),
        reports(read, "rotowire/reports/annotations.json") {}

  std::vector<std::string> games() const {
    std::vector<std::string> out;
    for (const auto& f : reports.items()) out.push_back(f.substr(0, f.size() - 4));
    return out;
  }
  std::string ask(const std::string& game, const std::string& question) const {
    return reports.ask(game + ".txt", question);
  }
};

const char* kSwords = "How many swords are depicted?";
const char* kMadonna = "Does this painting depict Madonna and Child?";
const char* kMadonnaSelect = "Does this image show: Madonna and Child?";
const char* kHorse = "Is there a horse in the image?";
const char* kHorseSelect = "Does this image show: a horse?";
const char* kPeople = "How many people are depicted?";

oj artwork(const QueryCase& c, const FileReader& read) {
  Artwork a(read);
  const auto& ps = a.paintings;
  auto param = [&](const char* k) { return c.params.at(k).get<std::string>(); };
  auto count_if = [&](auto pred) {
    double n = 0;
    for (const auto& p : ps) n += pred(p) ? 1 : 0;
    return n;
  };
  auto count_by = [&](const std::string& key, auto pred) {
    std::map<std::string, double> m;
    for (const auto& p : ps) m[p.at(key)] += pred(p) ? 1 : 0;
    return m;
  };
  auto count_by_century = [&](auto pred) {
    std::map<int, double> m;
    for (const auto& p : ps) {
      if (pred(p)) m[century(year(p.at("inception")))] += 1;
      else m.try_emplace(century(year(p.at("inception"))), 0);
    }
    return m;
  };
  auto all = [](const Row&) { return true; };
  const auto& id = c.id;

  if (id == "artwork-01") {
    auto m = param("movement");
    return scalar(number(count_if([&](const Row& p) { return p.at("movement") == m; })));
  }
  if (id == "artwork-02") {
    const Row* best = nullptr;
    for (const auto& p : ps) {
      if (!best || year(p.at("inception")) < year(best->at("inception"))) best = &p;
    }
    return scalar(best->at("title"));
  }
  if (id == "artwork-03") {
    std::map<std::string, int> genres;
    for (const auto& p : ps) genres[p.at("genre")] = 1;
    return scalar(number(static_cast<double>(genres.size())));
  }
  if (id == "artwork-04") {
    auto t = param("title");
    for (const auto& p : ps) {
      if (p.at("title") == t) return scalar(number(century(year(p.at("inception")))));
    }
  }
  if (id == "artwork-05") {
    auto g = param("genre");
    std::vector<std::string> titles;
    for (const auto& p : ps) {
      if (p.at("genre") == g) titles.push_back(p.at("title"));
    }
    std::sort(titles.begin(), titles.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& t : titles) rows.push_back({t});
    return table({{"title", "TEXT"}}, rows);
  }
  if (id == "artwork-06") {
    std::vector<std::vector<oj>> rows;
    for (const auto& [m, n] : count_by("movement", all)) rows.push_back({m, number(n)});
    return table({{"movement", "TEXT"}, {"num_paintings", "NUMBER"}}, rows);
  }
  if (id == "artwork-07") {
    auto m = param("movement");
    std::vector<std::pair<std::string, int>> hits;
    for (const auto& p : ps) {
      if (p.at("movement") == m) hits.emplace_back(p.at("title"), century(year(p.at("inception"))));
    }
    std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::vector<oj>> rows;
    for (const auto& [t, cent] : hits) rows.push_back({t, number(cent)});
    return table({{"title", "TEXT"}, {"century", "NUMBER"}}, rows);
  }
  if (id == "artwork-08") {
    std::vector<std::pair<double, std::string>> hits;
    for (const auto& p : ps) {
      if (year(p.at("inception")) < 1600) hits.emplace_back(year(p.at("inception")), p.at("title"));
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& [y, t] : hits) rows.push_back({t, number(y)});
    return table({{"title", "TEXT"}, {"inception", "NUMBER"}}, rows);
  }
  if (id == "artwork-09") {
    return bar_plot("century", "num_paintings", "Paintings per century", points_of(count_by_century(all)));
  }
  if (id == "artwork-10") {
    return bar_plot("movement", "num_paintings", "Paintings per movement", points_of(count_by("movement", all)));
  }
  if (id == "artwork-11") {
    return bar_plot("genre", "num_paintings", "Paintings per genre", points_of(count_by("genre", all)));
  }
  if (id == "artwork-12") {
    // WHERE runs before GROUP BY: centuries without a match do not appear.
    auto g = param("genre");
    std::map<int, double> m;
    for (const auto& p : ps) {
      if (p.at("genre") == g) m[century(year(p.at("inception")))] += 1;
    }
    return bar_plot("century", "num_paintings", "Paintings per century", points_of(m));
  }
  if (id == "artwork-13") {
    return scalar(number(count_if([&](const Row& p) { return a.ask(p, kMadonnaSelect) == "yes"; })));
  }
  if (id == "artwork-14") {
    std::optional<double> best;
    for (const auto& p : ps) {
      if (auto n = as_number(a.ask(p, kSwords))) best = best ? std::max(*best, *n) : *n;
    }
    return scalar(best ? number(*best) : oj(nullptr));
  }
  if (id == "artwork-15") {
    auto m = param("movement");
    return scalar(number(count_if([&](const Row& p) { return p.at("movement") == m && a.ask(p, kHorse) == "yes"; })));
  }
  if (id == "artwork-16") {
    auto t = param("title");
    for (const auto& p : ps) {
      if (p.at("title") == t) {
        auto n = as_number(a.ask(p, kPeople));
        return scalar(n ? number(*n) : oj(nullptr));
      }
    }
  }
  if (id == "artwork-17") {
    std::vector<std::string> titles;
    for (const auto& p : ps) {
      if (a.ask(p, kMadonnaSelect) == "yes") titles.push_back(p.at("title"));
    }
    std::sort(titles.begin(), titles.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& t : titles) rows.push_back({t});
    return table({{"title", "TEXT"}}, rows);
  }
  if (id == "artwork-18") {
    std::vector<std::vector<oj>> rows;
    for (const auto& [m, n] : count_by("movement", [&](const Row& p) { return a.ask(p, kHorse) == "yes"; })) {
      rows.push_back({m, number(n)});
    }
    return table({{"movement", "TEXT"}, {"num_paintings", "NUMBER"}}, rows);
  }
  if (id == "artwork-19") {
    std::vector<std::string> titles;
    for (const auto& p : ps) {
      auto n = as_number(a.ask(p, kSwords));
      if (n && *n > 2) titles.push_back(p.at("title"));
    }
    std::sort(titles.begin(), titles.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& t : titles) rows.push_back({t});
    return table({{"title", "TEXT"}}, rows);
  }
  if (id == "artwork-20") {
    std::vector<std::vector<oj>> rows;
    for (const auto& file : a.images.items()) {
      if (a.images.ask(file, kHorseSelect) == "yes") rows.push_back({"images/" + file});
    }
    return table({{"img_path", "TEXT"}}, rows);
  }
  if (id == "artwork-21") {
    std::map<int, std::optional<double>> m;
    for (const auto& p : ps) {
      auto& slot = m[century(year(p.at("inception")))];
      if (auto n = as_number(a.ask(p, kSwords))) slot = slot ? std::max(*slot, *n) : *n;
    }
    std::vector<std::pair<oj, oj>> points;
    for (const auto& [k, v] : m) points.emplace_back(oj(k), v ? number(*v) : oj(nullptr));
    return bar_plot("century", "max_swords", "Maximum number of swords per century", points);
  }
  if (id == "artwork-22") {
    return bar_plot("century", "num_paintings", "Madonna and Child per century",
                    points_of(count_by_century([&](const Row& p) { return a.ask(p, kMadonna) == "yes"; })));
  }
  if (id == "artwork-23") {
    std::map<std::string, std::pair<double, double>> acc;  // sum, count
    for (const auto& p : ps) {
      auto& slot = acc[p.at("movement")];
      if (auto n = as_number(a.ask(p, kPeople))) {
        slot.first += *n;
        slot.second += 1;
      }
    }
    std::vector<std::pair<oj, oj>> points;
    for (const auto& [k, v] : acc) {
      points.emplace_back(oj(k), v.second > 0 ? number(round2(v.first / v.second)) : oj(nullptr));
    }
    return bar_plot("movement", "avg_people", "Average number of people per movement", points);
  }
  if (id == "artwork-24") {
    return bar_plot("genre", "num_paintings", "Paintings with a horse per genre",
                    points_of(count_by("genre", [&](const Row& p) { return a.ask(p, kHorse) == "yes"; })));
  }
  fail(ErrorKind::kInvalidArgument, "oracle: no reference answer for case '" + id + "'");
}

oj rotowire(const QueryCase& c, const FileReader& read) {
  Rotowire r(read);
  const auto& id = c.id;
  auto param = [&](const char* k) { return c.params.at(k).get<std::string>(); };
  auto games = r.games();

  // Per-team count of games whose templated question is answered "yes",
  // over the nested-loop product teams x reports.
  auto yes_per = [&](const std::string& key, const std::string& prefix, const std::string& suffix,
                     auto team_filter) {
    std::map<std::string, double> m;
    for (const auto& t : r.teams) {
      if (!team_filter(t)) continue;
      auto& slot = m[t.at(key)];
      for (const auto& g : games) {
        if (r.ask(g, prefix + t.at("name") + suffix) == "yes") slot += 1;
      }
    }
    return m;
  };
  auto max_points = [&]() {
    std::map<std::string, std::optional<double>> m;
    for (const auto& t : r.teams) {
      auto& slot = m[t.at("name")];
      for (const auto& g : games) {
        if (auto n = as_number(r.ask(g, "How many points did " + t.at("name") + " score?"))) {
          slot = slot ? std::max(*slot, *n) : *n;
        }
      }
    }
    return m;
  };
  auto any = [](const Row&) { return true; };

  if (id == "rotowire-01") {
    double n = 0;
    for (const auto& t : r.teams) n += t.at("conference") == "Eastern" ? 1 : 0;
    return scalar(number(n));
  }
  if (id == "rotowire-02") {
    const Row* best = nullptr;
    for (const auto& t : r.teams) {
      if (!best || std::stod(t.at("championships")) > std::stod(best->at("championships"))) best = &t;
    }
    return scalar(best->at("name"));
  }
  if (id == "rotowire-03") {
    double n = 0;
    for (const auto& p : r.players) n += std::stod(p.at("height_cm")) > 200 ? 1 : 0;
    return scalar(number(n));
  }
  if (id == "rotowire-04") {
    auto team = param("team");
    double sum = 0, n = 0;
    for (const auto& p : r.players) {
      if (p.at("team") == team) sum += std::stod(p.at("height_cm")), n += 1;
    }
    return scalar(n > 0 ? number(round2(sum / n)) : oj(nullptr));
  }
  if (id == "rotowire-05") {
    std::vector<std::string> names;
    for (const auto& t : r.teams) {
      if (t.at("division") == "Atlantic") names.push_back(t.at("name"));
    }
    std::sort(names.begin(), names.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& n : names) rows.push_back({n});
    return table({{"name", "TEXT"}}, rows);
  }
  if (id == "rotowire-06") {
    std::map<std::string, double> m;
    for (const auto& p : r.players) m[p.at("team")] += 1;
    std::vector<std::vector<oj>> rows;
    for (const auto& [k, v] : m) rows.push_back({k, number(v)});
    return table({{"team", "TEXT"}, {"num_players", "NUMBER"}}, rows);
  }
  if (id == "rotowire-07") {
    std::vector<std::pair<std::string, std::string>> hits;
    for (const auto& t : r.teams) {
      if (std::stod(t.at("founded")) < 1950) hits.emplace_back(t.at("name"), t.at("arena"));
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& [n, a] : hits) rows.push_back({n, a});
    return table({{"name", "TEXT"}, {"arena", "TEXT"}}, rows);
  }
  if (id == "rotowire-08") {
    double y = c.params.at("year").get<double>();
    std::vector<std::pair<std::string, std::string>> hits;
    for (const auto& p : r.players) {
      if (std::stod(p.at("birth_year")) > y) hits.emplace_back(p.at("name"), p.at("team"));
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::vector<oj>> rows;
    for (const auto& [n, t] : hits) rows.push_back({n, t});
    return table({{"name", "TEXT"}, {"team", "TEXT"}}, rows);
  }
  if (id == "rotowire-09") {
    std::vector<std::pair<oj, oj>> points;
    for (const auto& t : r.teams) points.emplace_back(oj(t.at("name")), number(std::stod(t.at("championships"))));
    return bar_plot("name", "championships", "Championships per team", points);
  }
  if (id == "rotowire-10") {
    std::map<std::string, std::pair<double, double>> acc;
    for (const auto& p : r.players) {
      acc[p.at("team")].first += std::stod(p.at("height_cm"));
      acc[p.at("team")].second += 1;
    }
    std::vector<std::pair<oj, oj>> points;
    for (const auto& [k, v] : acc) points.emplace_back(oj(k), number(round2(v.first / v.second)));
    return bar_plot("team", "avg_height", "Average player height per team", points);
  }
  if (id == "rotowire-11") {
    std::map<std::string, double> m;
    for (const auto& p : r.players) m[p.at("nationality")] += 1;
    return bar_plot("nationality", "num_players", "Players per nationality", points_of(m));
  }
  if (id == "rotowire-12") {
    std::map<int, double> m;
    for (const auto& p : r.players) m[static_cast<int>(std::floor(std::stod(p.at("birth_year")) / 10)) * 10] += 1;
    return bar_plot("decade", "num_players", "Players per birth decade", points_of(m));
  }
  if (id == "rotowire-13") {
    auto team = param("team");
    return scalar(max_points()[team] ? number(*max_points()[team]) : oj(nullptr));
  }
  if (id == "rotowire-14") {
    auto team = param("team");
    double n = 0;
    for (const auto& g : games) n += r.ask(g, "Did " + team + " win the game?") == "yes" ? 1 : 0;
    return scalar(number(n));
  }
  if (id == "rotowire-15") {
    double n = 0;
    for (const auto& g : games) {
      auto p = as_number(r.ask(g, "How many points did the winning team score?"));
      if (p && *p > 110) n += 1;
    }
    return scalar(number(n));
  }
  if (id == "rotowire-16") {
    return scalar(r.ask(param("game"), "Which team won the game?"));
  }
  if (id == "rotowire-17") {
    std::vector<std::vector<oj>> rows;
    for (const auto& [k, v] : max_points()) rows.push_back({k, v ? number(*v) : oj(nullptr)});
    return table({{"name", "TEXT"}, {"max_points", "NUMBER"}}, rows);
  }
  if (id == "rotowire-18") {
    std::vector<std::vector<oj>> rows;
    for (const auto& [k, v] : yes_per("name", "Did ", " lose the game?", any)) rows.push_back({k, number(v)});
    return table({{"name", "TEXT"}, {"num_losses", "NUMBER"}}, rows);
  }
  if (id == "rotowire-19") {
    std::vector<std::vector<oj>> rows;
    for (const auto& g : games) rows.push_back({g, r.ask(g, "Which team won the game?")});
    return table({{"game_id", "TEXT"}, {"winner", "TEXT"}}, rows);
  }
  if (id == "rotowire-20") {
    std::vector<std::vector<oj>> rows;
    auto eastern = [](const Row& t) { return t.at("conference") == "Eastern"; };
    for (const auto& [k, v] : yes_per("name", "Did ", " win the game?", eastern)) rows.push_back({k, number(v)});
    return table({{"name", "TEXT"}, {"num_wins", "NUMBER"}}, rows);
  }
  if (id == "rotowire-21") {
    std::vector<std::pair<oj, oj>> points;
    for (const auto& [k, v] : max_points()) points.emplace_back(oj(k), v ? number(*v) : oj(nullptr));
    return bar_plot("name", "max_points", "Highest points per team", points);
  }
  if (id == "rotowire-22") {
    return bar_plot("name", "num_wins", "Games won per team", points_of(yes_per("name", "Did ", " win the game?", any)));
  }
  if (id == "rotowire-23") {
    std::vector<std::pair<oj, oj>> points;
    for (const auto& g : games) {
      auto n = as_number(r.ask(g, "How many points were scored in total?"));
      points.emplace_back(oj(g), n ? number(*n) : oj(nullptr));
    }
    return bar_plot("game_id", "total_points", "Total points per game", points);
  }
  if (id == "rotowire-24") {
    return bar_plot("conference", "num_losses", "Losses per conference",
                    points_of(yes_per("conference", "Did ", " lose the game?", any)));
  }
  fail(ErrorKind::kInvalidArgument, "oracle: no reference answer for case '" + id + "'");
}

}  // namespace

oj oracle_result(const QueryCase& c, const FileReader& read) {
  if (c.dataset == "artwork") return artwork(c, read);
  if (c.dataset == "rotowire") return rotowire(c, read);
  fail(ErrorKind::kInvalidArgument, "oracle: unknown dataset '" + c.dataset + "'");
}

oj oracle_result(const QueryCase& c, const std::filesystem::path& root) {
  FileReader read = [&](const std::string& rel) { return read_file(root / rel); };
  return oracle_result(c, read);
}

}  // namespace lakeq::bench
