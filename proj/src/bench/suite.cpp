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
#include <map>

#include "bench/bench.hpp"
#include "bench/fixture_data.hpp"
#include "common/error.hpp"
#include "common/text.hpp"

namespace lakeq::bench {

using oj = nlohmann::ordered_json;

const char* to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::kValue: return "value";
    case OutputKind::kTable: return "table";
    case OutputKind::kPlot: return "plot";
  }
  return "?";
}

const char* to_string(Modality modality) {
  return modality == Modality::kSingle ? "single" : "multi";
}

const char* to_string(FailureCategory category) {
  switch (category) {
    case FailureCategory::kCorrect: return "Correct";
    case FailureCategory::kImpossibleActions: return "Impossible Actions";
    case FailureCategory::kDataMisunderstanding: return "Data Misunderstanding";
    case FailureCategory::kIllogicalMissingSteps: return "Illogical / Missing Steps";
    case FailureCategory::kWrongArguments: return "Wrong Arguments";
    case FailureCategory::kWrongTool: return "Wrong Tool";
  }
  return "?";
}

std::optional<OutputKind> parse_output_kind(std::string_view text) {
  for (auto k : {OutputKind::kValue, OutputKind::kTable, OutputKind::kPlot}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<Modality> parse_modality(std::string_view text) {
  for (auto m : {Modality::kSingle, Modality::kMulti}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

const std::vector<FailureCategory>& all_categories() {
  static const std::vector<FailureCategory> kAll = {
      FailureCategory::kCorrect,           FailureCategory::kImpossibleActions,
      FailureCategory::kDataMisunderstanding, FailureCategory::kIllogicalMissingSteps,
      FailureCategory::kWrongArguments,    FailureCategory::kWrongTool};
  return kAll;
}

std::optional<FailureCategory> parse_failure_category(std::string_view text) {
  for (auto c : all_categories()) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

oj case_to_json(const QueryCase& c) {
  oj j;
  j["id"] = c.id;
  j["dataset"] = c.dataset;
  j["query"] = c.query;
  j["output"] = to_string(c.output);
  j["modality"] = to_string(c.modality);
  j["datasets"] = c.datasets;
  j["params"] = c.params;
  j["gold_ops"] = c.gold_ops;
  j["gold_intents"] = c.gold_intents;
  j["gold_result"] = c.gold_result;
  j["gold_digest"] = c.gold_digest;
  return j;
}

QueryCase case_from_json(const oj& j) {
  auto where = [&] { return j.contains("id") && j["id"].is_string() ? " in case '" + j["id"].get<std::string>() + "'" : std::string(); };
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) fail(ErrorKind::kParse, std::string("suite: missing string '") + key + "'" + where());
    return j[key].get<std::string>();
  };
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) fail(ErrorKind::kParse, std::string("suite: '") + key + "' must be an array" + where());
    for (const auto& v : j[key]) {
      if (!v.is_string()) fail(ErrorKind::kParse, std::string("suite: '") + key + "' must hold strings" + where());
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  if (!j.is_object()) fail(ErrorKind::kParse, "suite: every case must be an object");
  QueryCase c;
  c.id = str("id");
  c.dataset = str("dataset");
  c.query = str("query");
  auto out = parse_output_kind(str("output"));
  if (!out) fail(ErrorKind::kParse, "suite: output must be value, table or plot" + where());
  c.output = *out;
  auto mod = parse_modality(str("modality"));
  if (!mod) fail(ErrorKind::kParse, "suite: modality must be single or multi" + where());
  c.modality = *mod;
  c.datasets = strings("datasets");
  if (j.contains("params")) c.params = j["params"];
  c.gold_ops = strings("gold_ops");
  c.gold_intents = strings("gold_intents");
  // Parsed in file order so that the stored result keeps its canonical key order.
  if (j.contains("gold_result")) c.gold_result = j["gold_result"];
  if (j.contains("gold_digest")) c.gold_digest = str("gold_digest");
  return c;
}

std::string serialize_suite(const std::vector<QueryCase>& cases) {
  oj arr = oj::array();
  for (const auto& c : cases) arr.push_back(case_to_json(c));
  return arr.dump(2) + "\n";
}

std::vector<QueryCase> parse_suite(std::string_view text) {
  oj j;
  try {
    j = oj::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("suite is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) fail(ErrorKind::kParse, "suite must be a JSON array of cases");
  std::vector<QueryCase> out;
  for (const auto& c : j) out.push_back(case_from_json(c));
  return out;
}

std::vector<QueryCase> load_suite(const std::filesystem::path& path) { return parse_suite(read_file(path)); }

QueryConfig case_config(const QueryCase& c, std::size_t max_retries) {
  QueryConfig config;
  config.datasets = c.datasets;
  config.prune = false;
  config.max_retries = max_retries;
  return config;
}

namespace detail {
namespace {

struct Step {
  Step(std::string description_, std::string op_, oj args_, std::string udf_ = {})
      : description(std::move(description_)), op(std::move(op_)), args(std::move(args_)), udf(std::move(udf_)) {}

  std::string description;
  std::string op;
  oj args;
  std::string udf;  // expression answered in the udf phase
};

std::string mapping_response(const std::string& op, const oj& args) {
  oj choice;
  choice["operator"] = op;
  choice["args"] = args;
  return "```json\n" + choice.dump() + "\n```";
}

std::string plan_response(const std::vector<std::string>& descriptions) {
  std::string s;
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    s += "Step " + std::to_string(i + 1) + ": " + descriptions[i] + "\n";
  }
  return s;
}

CaseScript script_for(const std::vector<Step>& steps) {
  std::vector<std::string> descriptions;
  oj mapping = oj::array(), udf = oj::array();
  for (const auto& s : steps) {
    descriptions.push_back(s.description);
    mapping.push_back(mapping_response(s.op, s.args));
    if (!s.udf.empty()) udf.push_back("```\n" + s.udf + "\n```");
  }
  CaseScript script;
  script["planning"] = oj::array({plan_response(descriptions)});
  script["mapping"] = mapping;
  if (!udf.empty()) script["udf"] = udf;
  return script;
}

CaseScript plan_only(const std::vector<std::string>& descriptions) {
  CaseScript script;
  script["planning"] = oj::array({plan_response(descriptions)});
  return script;
}

oj sql(const std::string& query) { return {{"query", query}}; }

oj udf_args(const std::string& input, const std::string& description, const std::string& out) {
  return {{"input", input}, {"description", description}, {"out_column", out}};
}

oj vqa(const std::string& input, const std::string& question, const std::string& out) {
  return {{"input", input}, {"image_column", "image"}, {"question", question}, {"out_column", out}};
}

oj tqa(const std::string& input, const std::string& tmpl, const std::string& out) {
  return {{"input", input}, {"text_column", "report"}, {"question_template", tmpl}, {"out_column", out}};
}

oj select_images(const std::string& input, const std::string& description) {
  return {{"input", input}, {"image_column", "image"}, {"description", description}};
}

oj plot(const std::string& input, const std::string& x, const std::string& y, const std::string& title) {
  return {{"input", input}, {"kind", "bar"}, {"x", x}, {"y", y}, {"title", title}};
}

const char* kCenturyExpr = "floor((inception - 1) / 100) + 1";
const char* kCenturyDescription = "the century in which the painting was created, computed from inception";

Step century_step() {
  return {"Compute the century of every painting from its inception year.", "udf_transform",
          udf_args("paintings", kCenturyDescription, "century"), kCenturyExpr};
}

struct Builder {
  std::vector<SuiteEntry> entries;

  SuiteEntry& add(std::string id, std::string dataset, std::string query, OutputKind output,
                  Modality modality, std::vector<std::string> datasets, std::vector<Step> steps,
                  oj params = oj::object()) {
    SuiteEntry e;
    e.c.id = std::move(id);
    e.c.dataset = std::move(dataset);
    e.c.query = std::move(query);
    e.c.output = output;
    e.c.modality = modality;
    e.c.datasets = std::move(datasets);
    e.c.params = std::move(params);
    for (const auto& s : steps) {
      e.c.gold_ops.push_back(s.op);
      e.c.gold_intents.push_back(step_intent(s.description));
    }
    e.gold = script_for(steps);
    entries.push_back(std::move(e));
    return entries.back();
  }
};

void flaw(SuiteEntry& e, FailureCategory category, CaseScript script) {
  e.flawed = FlawedCase{category, std::move(script)};
}

// Gold mapping responses with one step swapped for another choice.
CaseScript with_step(const CaseScript& gold, std::size_t index, const std::string& op, const oj& args,
                     bool truncate) {
  CaseScript s = gold;
  auto& mapping = s["mapping"];
  mapping[index] = mapping_response(op, args);
  if (truncate) {
    oj cut = oj::array();
    for (std::size_t i = 0; i <= index; ++i) cut.push_back(mapping[i]);
    mapping = cut;
  }
  return s;
}

std::string most_common_genre(const FixtureData& d) {
  std::map<std::string, int> counts;
  for (const auto& p : d.paintings) ++counts[p.genre];
  std::string best;
  int n = -1;
  for (const auto& [g, c] : counts) {
    if (c > n) best = g, n = c;
  }
  return best;
}

void artwork_cases(const FixtureData& d, Builder& b) {
  const auto V = OutputKind::kValue, T = OutputKind::kTable, P = OutputKind::kPlot;
  const auto S = Modality::kSingle, M = Modality::kMulti;
  const std::vector<std::string> paintings = {"paintings"};

  // single modality
  const auto& mov1 = d.paintings[0].movement;
  b.add("artwork-01", "artwork", "How many paintings belong to the " + mov1 + " movement?", V, S, paintings,
        {{"Count the paintings whose movement is " + mov1 + ".", "sql",
          sql("SELECT COUNT(*) AS num_paintings FROM paintings WHERE movement = '" + mov1 + "'")}},
        {{"movement", mov1}});
  b.add("artwork-02", "artwork", "What is the title of the oldest painting?", V, S, paintings,
        {{"Select the title of the painting with the earliest inception year.", "sql",
          sql("SELECT title FROM paintings ORDER BY inception ASC LIMIT 1")}});
  b.add("artwork-03", "artwork", "How many different genres are there?", V, S, paintings,
        {{"Count the distinct genres of the paintings.", "sql",
          sql("SELECT COUNT(DISTINCT genre) AS num_genres FROM paintings")}});
  const auto& title4 = d.paintings[1].title;
  b.add("artwork-04", "artwork", "In which century was '" + title4 + "' painted?", V, S, paintings,
        {century_step(),
         {"Select the century of the painting titled '" + title4 + "'.", "sql",
          sql("SELECT century FROM r1 WHERE title = '" + title4 + "'")}},
        {{"title", title4}});
  auto genre5 = most_common_genre(d);
  b.add("artwork-05", "artwork", "List the titles of all " + genre5 + " paintings.", T, S, paintings,
        {{"Select the titles of the paintings whose genre is " + genre5 + ".", "sql",
          sql("SELECT title FROM paintings WHERE genre = '" + genre5 + "' ORDER BY title")}},
        {{"genre", genre5}});
  b.add("artwork-06", "artwork", "How many paintings are there per movement?", T, S, paintings,
        {{"Count the paintings per movement.", "sql",
          sql("SELECT movement, COUNT(*) AS num_paintings FROM paintings GROUP BY movement")}});
  const auto& mov7 = d.paintings[2].movement;
  auto& a07 = b.add("artwork-07", "artwork",
                    "List the title and century of every painting from the " + mov7 + " movement.", T, S,
                    paintings,
                    {century_step(),
                     {"Select title and century of the paintings whose movement is " + mov7 + ".", "sql",
                      sql("SELECT title, century FROM r1 WHERE movement = '" + mov7 + "' ORDER BY title")}},
                    {{"movement", mov7}});
  (void)a07;
  auto& a08 = b.add("artwork-08", "artwork", "Which paintings were created before 1600? Show title and inception.",
                    T, S, paintings,
                    {{"Select title and inception of the paintings with an inception year before 1600.", "sql",
                      sql("SELECT title, inception FROM paintings WHERE inception < 1600 ORDER BY inception, title")}});
  flaw(a08, FailureCategory::kImpossibleActions,
       plan_only({"The data lake does not contain creation dates, so this query cannot be answered."}));
  b.add("artwork-09", "artwork", "Plot the number of paintings per century.", P, S, paintings,
        {century_step(),
         {"Count the paintings per century.", "sql",
          sql("SELECT century, COUNT(*) AS num_paintings FROM r1 GROUP BY century")},
         {"Plot the counts per century as a bar chart.", "plot",
          plot("r2", "century", "num_paintings", "Paintings per century")}});
  b.add("artwork-10", "artwork", "Plot the number of paintings per movement.", P, S, paintings,
        {{"Count the paintings per movement.", "sql",
          sql("SELECT movement, COUNT(*) AS num_paintings FROM paintings GROUP BY movement")},
         {"Plot the counts per movement as a bar chart.", "plot",
          plot("r1", "movement", "num_paintings", "Paintings per movement")}});
  b.add("artwork-11", "artwork", "Plot the number of paintings per genre.", P, S, paintings,
        {{"Count the paintings per genre.", "sql",
          sql("SELECT genre, COUNT(*) AS num_paintings FROM paintings GROUP BY genre")},
         {"Plot the counts per genre as a bar chart.", "plot",
          plot("r1", "genre", "num_paintings", "Paintings per genre")}});
  const auto& genre12 = d.paintings[3].genre;
  b.add("artwork-12", "artwork", "Plot the number of " + genre12 + " paintings per century.", P, S, paintings,
        {century_step(),
         {"Count the paintings whose genre is " + genre12 + " per century.", "sql",
          sql("SELECT century, COUNT(*) AS num_paintings FROM r1 WHERE genre = '" + genre12 +
              "' GROUP BY century")},
         {"Plot the counts per century as a bar chart.", "plot",
          plot("r2", "century", "num_paintings", "Paintings per century")}},
        {{"genre", genre12}});

  // multiple modalities
  auto& a13 = b.add("artwork-13", "artwork", "How many paintings depict Madonna and Child?", V, M, paintings,
                    {{"Select the paintings whose image shows Madonna and Child.", "image_select",
                      select_images("paintings", kMadonnaDescription)},
                     {"Count the selected paintings.", "sql", sql("SELECT COUNT(*) AS num_paintings FROM r1")}});
  {
    CaseScript s = plan_only({"Select the paintings whose genre is religious art.", "Count the selected paintings."});
    s["mapping"] = oj::array({mapping_response("sql", sql("SELECT * FROM paintings WHERE genre = 'religious art'")),
                              mapping_response("sql", sql("SELECT COUNT(*) AS num_paintings FROM r1"))});
    flaw(a13, FailureCategory::kDataMisunderstanding, s);
  }
  auto& a14 = b.add("artwork-14", "artwork", "What is the maximum number of swords depicted on a single painting?",
                    V, M, paintings,
                    {{"Ask for every painting image how many swords are depicted.", "visual_qa",
                      vqa("paintings", kSwordsQuestion, "num_swords")},
                     {"Compute the maximum number of swords over all paintings.", "sql",
                      sql("SELECT MAX(CAST(num_swords AS INTEGER)) AS max_swords FROM r1")}});
  flaw(a14, FailureCategory::kDataMisunderstanding,
       plan_only({"Select the paintings whose title mentions a battle or a duel.",
                  "Output the count of those paintings as the maximum number of swords."}));
  std::string mov15;
  for (const auto& p : d.paintings) {
    if (p.horse) {
      mov15 = p.movement;
      break;
    }
  }
  auto& a15 = b.add("artwork-15", "artwork", "How many paintings from the " + mov15 + " movement show a horse?", V,
                    M, paintings,
                    {{"Select the paintings whose movement is " + mov15 + ".", "sql",
                      sql("SELECT * FROM paintings WHERE movement = '" + mov15 + "'")},
                     {"Ask for every selected painting image whether there is a horse in the image.", "visual_qa",
                      vqa("r1", kHorseQuestion, "has_horse")},
                     {"Count the paintings where the answer is yes.", "sql",
                      sql("SELECT COUNT(*) AS num_paintings FROM r2 WHERE has_horse = 'yes'")}},
                    {{"movement", mov15}});
  flaw(a15, FailureCategory::kWrongArguments,
       with_step(a15.gold, 1, "visual_qa", vqa("r1", "How many horses are depicted?", "has_horse"), false));
  const auto& title16 = d.paintings[4].title;
  auto& a16 = b.add("artwork-16", "artwork", "How many people are depicted on the painting '" + title16 + "'?", V, M,
                    paintings,
                    {{"Select the painting titled '" + title16 + "'.", "sql",
                      sql("SELECT * FROM paintings WHERE title = '" + title16 + "'")},
                     {"Ask for the image of the selected painting how many people are depicted.", "visual_qa",
                      vqa("r1", kPeopleQuestion, "num_people")},
                     {"Output the answer as an integer.", "sql",
                      sql("SELECT CAST(num_people AS INTEGER) AS num_people FROM r2")}},
                    {{"title", title16}});
  flaw(a16, FailureCategory::kImpossibleActions,
       plan_only({"The people on a painting cannot be determined because the data lake has no information about them."}));
  auto& a17 = b.add("artwork-17", "artwork", "List the titles of the paintings that depict Madonna and Child.", T,
                    M, paintings,
                    {{"Select the paintings whose image shows Madonna and Child.", "image_select",
                      select_images("paintings", kMadonnaDescription)},
                     {"Output the titles of the selected paintings.", "sql", sql("SELECT title FROM r1 ORDER BY title")}});
  flaw(a17, FailureCategory::kDataMisunderstanding,
       plan_only({"Select the paintings whose title contains the word Madonna.", "Output their titles."}));
  auto& a18 = b.add("artwork-18", "artwork", "For each movement, how many paintings show a horse?", T, M, paintings,
                    {{"Ask for every painting image whether there is a horse in the image.", "visual_qa",
                      vqa("paintings", kHorseQuestion, "has_horse")},
                     {"Count the paintings with a horse per movement.", "sql",
                      sql("SELECT movement, SUM(CASE WHEN has_horse = 'yes' THEN 1 ELSE 0 END) AS num_paintings "
                          "FROM r1 GROUP BY movement")}});
  flaw(a18, FailureCategory::kDataMisunderstanding,
       plan_only({"Select the landscape and history paintings, as those are the ones with horses.",
                  "Count them per movement."}));
  b.add("artwork-19", "artwork", "List the titles of paintings with more than two swords.", T, M, paintings,
        {{"Ask for every painting image how many swords are depicted.", "visual_qa",
          vqa("paintings", kSwordsQuestion, "num_swords")},
         {"Keep only the paintings with more than two swords and output their titles.", "sql",
          sql("SELECT title FROM r1 WHERE CAST(num_swords AS INTEGER) > 2 ORDER BY title")}});
  b.add("artwork-20", "artwork", "Which images in the image collection show a horse?", T, M, {"painting_images"},
        {{"Select the images that show a horse.", "image_select", select_images("painting_images", kHorseDescription)},
         {"Output the paths of the selected rows.", "sql", sql("SELECT img_path FROM r1 ORDER BY img_path")}});
  auto& a21 = b.add("artwork-21", "artwork",
                    "Plot the maximum number of swords depicted on the paintings of each century.", P, M, paintings,
                    {century_step(),
                     {"Ask for every painting image how many swords are depicted.", "visual_qa",
                      vqa("r1", kSwordsQuestion, "num_swords")},
                     {"Compute the maximum number of swords per century.", "sql",
                      sql("SELECT century, MAX(CAST(num_swords AS INTEGER)) AS max_swords FROM r2 GROUP BY century")},
                     {"Plot the maximum number of swords per century as a bar chart.", "plot",
                      plot("r3", "century", "max_swords", "Maximum number of swords per century")}});
  flaw(a21, FailureCategory::kIllogicalMissingSteps,
       plan_only({"Ask for every painting image how many swords are depicted.",
                  "Compute the maximum number of swords per century.",
                  "Plot the maximum number of swords per century as a bar chart."}));
  auto& a22 = b.add("artwork-22", "artwork", "Plot the paintings depicting Madonna and Child per century.", P, M,
                    paintings,
                    {century_step(),
                     {"Ask for every painting image whether it depicts Madonna and Child.", "visual_qa",
                      vqa("r1", kMadonnaQuestion, "depicts_madonna")},
                     {"Count the paintings where the answer is yes per century.", "sql",
                      sql("SELECT century, SUM(CASE WHEN depicts_madonna = 'yes' THEN 1 ELSE 0 END) AS num_paintings "
                          "FROM r2 GROUP BY century")},
                     {"Plot the counts per century as a bar chart.", "plot",
                      plot("r3", "century", "num_paintings", "Madonna and Child per century")}});
  flaw(a22, FailureCategory::kDataMisunderstanding,
       plan_only({"Compute the century of every painting from its inception year.",
                  "Count the religious art paintings per century.", "Plot the counts per century as a bar chart."}));
  auto& a23 = b.add("artwork-23", "artwork", "Plot the average number of people depicted per movement.", P, M,
                    paintings,
                    {{"Ask for every painting image how many people are depicted.", "visual_qa",
                      vqa("paintings", kPeopleQuestion, "num_people")},
                     {"Compute the average number of people per movement.", "sql",
                      sql("SELECT movement, ROUND(AVG(CAST(num_people AS INTEGER)), 2) AS avg_people FROM r1 "
                          "GROUP BY movement")},
                     {"Plot the averages per movement as a bar chart.", "plot",
                      plot("r2", "movement", "avg_people", "Average number of people per movement")}});
  flaw(a23, FailureCategory::kWrongArguments,
       with_step(a23.gold, 1, "sql",
                 sql("SELECT movement, MAX(CAST(num_people AS INTEGER)) AS avg_people FROM r1 GROUP BY movement"),
                 false));
  auto& a24 = b.add("artwork-24", "artwork", "Plot the number of paintings showing a horse per genre.", P, M,
                    paintings,
                    {{"Ask for every painting image whether there is a horse in the image.", "visual_qa",
                      vqa("paintings", kHorseQuestion, "has_horse")},
                     {"Count the paintings with a horse per genre.", "sql",
                      sql("SELECT genre, SUM(CASE WHEN has_horse = 'yes' THEN 1 ELSE 0 END) AS num_paintings "
                          "FROM r1 GROUP BY genre")},
                     {"Plot the counts per genre as a bar chart.", "plot",
                      plot("r2", "genre", "num_paintings", "Paintings with a horse per genre")}});
  flaw(a24, FailureCategory::kWrongTool,
       with_step(a24.gold, 0, "text_qa",
                 oj{{"input", "paintings"}, {"text_column", "image"}, {"question_template", kHorseQuestion},
                    {"out_column", "has_horse"}},
                 true));
}

void rotowire_cases(const FixtureData& d, Builder& b) {
  const auto V = OutputKind::kValue, T = OutputKind::kTable, P = OutputKind::kPlot;
  const auto S = Modality::kSingle, M = Modality::kMulti;
  const std::vector<std::string> teams = {"teams"}, players = {"players"};
  const std::vector<std::string> teams_reports = {"teams", "game_reports"}, reports = {"game_reports"};

  // single modality
  b.add("rotowire-01", "rotowire", "How many teams are in the Eastern conference?", V, S, teams,
        {{"Count the teams whose conference is Eastern.", "sql",
          sql("SELECT COUNT(*) AS num_teams FROM teams WHERE conference = 'Eastern'")}});
  b.add("rotowire-02", "rotowire", "Which team has won the most championships?", V, S, teams,
        {{"Select the name of the team with the largest championships value.", "sql",
          sql("SELECT name FROM teams ORDER BY championships DESC LIMIT 1")}});
  b.add("rotowire-03", "rotowire", "How many players are taller than 200 cm?", V, S, players,
        {{"Count the players whose height is above 200 cm.", "sql",
          sql("SELECT COUNT(*) AS num_players FROM players WHERE height_cm > 200")}});
  const auto& team4 = d.games[0].home;
  b.add("rotowire-04", "rotowire", "What is the average height of the players of the " + team4 + "?", V, S, players,
        {{"Compute the average height of the players whose team is " + team4 + ".", "sql",
          sql("SELECT ROUND(AVG(height_cm), 2) AS avg_height FROM players WHERE team = '" + team4 + "'")}},
        {{"team", team4}});
  b.add("rotowire-05", "rotowire", "List all teams of the Atlantic division.", T, S, teams,
        {{"Select the names of the teams whose division is Atlantic.", "sql",
          sql("SELECT name FROM teams WHERE division = 'Atlantic' ORDER BY name")}});
  b.add("rotowire-06", "rotowire", "How many players does each team have?", T, S, players,
        {{"Count the players per team.", "sql", sql("SELECT team, COUNT(*) AS num_players FROM players GROUP BY team")}});
  auto& r07 = b.add("rotowire-07", "rotowire", "List the name and arena of every team founded before 1950.", T, S,
                    teams,
                    {{"Select name and arena of the teams founded before 1950.", "sql",
                      sql("SELECT name, arena FROM teams WHERE founded < 1950 ORDER BY name")}});
  flaw(r07, FailureCategory::kImpossibleActions,
       plan_only({"The arena of a team is not available in the data lake, so this query cannot be answered."}));
  std::vector<int> years;
  for (const auto& p : d.players) years.push_back(p.birth_year);
  std::sort(years.begin(), years.end());
  int year8 = years[years.size() / 3] - 1;
  b.add("rotowire-08", "rotowire",
        "Which players were born after " + std::to_string(year8) + "? Show name and team.", T, S, players,
        {{"Select name and team of the players born after " + std::to_string(year8) + ".", "sql",
          sql("SELECT name, team FROM players WHERE birth_year > " + std::to_string(year8) + " ORDER BY name")}},
        {{"year", year8}});
  b.add("rotowire-09", "rotowire", "Plot the number of championships per team.", P, S, teams,
        {{"Plot the championships of every team as a bar chart.", "plot",
          plot("teams", "name", "championships", "Championships per team")}});
  b.add("rotowire-10", "rotowire", "Plot the average player height per team.", P, S, players,
        {{"Compute the average height per team.", "sql",
          sql("SELECT team, ROUND(AVG(height_cm), 2) AS avg_height FROM players GROUP BY team")},
         {"Plot the averages per team as a bar chart.", "plot",
          plot("r1", "team", "avg_height", "Average player height per team")}});
  b.add("rotowire-11", "rotowire", "Plot the number of players per nationality.", P, S, players,
        {{"Count the players per nationality.", "sql",
          sql("SELECT nationality, COUNT(*) AS num_players FROM players GROUP BY nationality")},
         {"Plot the counts per nationality as a bar chart.", "plot",
          plot("r1", "nationality", "num_players", "Players per nationality")}});
  b.add("rotowire-12", "rotowire", "Plot the number of players per birth decade.", P, S, players,
        {{"Derive the birth decade of every player from the birth year.", "udf_transform",
          udf_args("players", "the decade of birth_year, e.g. 1990 for 1994", "decade"),
          "floor(birth_year / 10) * 10"},
         {"Count the players per decade.", "sql",
          sql("SELECT decade, COUNT(*) AS num_players FROM r1 GROUP BY decade")},
         {"Plot the counts per decade as a bar chart.", "plot",
          plot("r2", "decade", "num_players", "Players per birth decade")}});

  // multiple modalities
  const std::string points_q = "How many points did {name} score?";
  const std::string won_q = "Did {name} win the game?";
  const std::string lost_q = "Did {name} lose the game?";
  const auto& team13 = d.games[0].away;
  auto& r13 = b.add("rotowire-13", "rotowire",
                    "What is the highest number of points the " + team13 + " scored in a game?", V, M, teams_reports,
                    {{"Join the team " + team13 + " with the game reports.", "sql",
                      sql("SELECT t.name, g.game_id, g.report FROM teams t CROSS JOIN game_reports g WHERE t.name = '" +
                          team13 + "'")},
                     {"Extract from every game report how many points the team scored.", "text_qa",
                      tqa("r1", points_q, "points")},
                     {"Compute the highest number of points.", "sql",
                      sql("SELECT MAX(CAST(points AS INTEGER)) AS max_points FROM r2")}},
                    {{"team", team13}});
  flaw(r13, FailureCategory::kWrongArguments,
       with_step(r13.gold, 1, "text_qa", tqa("r1", "How many points did the team score?", "points"), false));
  const auto& team14 = d.games[1].home;
  auto& r14 = b.add("rotowire-14", "rotowire", "How many games did the " + team14 + " win?", V, M, teams_reports,
                    {{"Join the team " + team14 + " with the game reports.", "sql",
                      sql("SELECT t.name, g.game_id, g.report FROM teams t CROSS JOIN game_reports g WHERE t.name = '" +
                          team14 + "'")},
                     {"Extract from every game report whether the team won.", "text_qa", tqa("r1", won_q, "won")},
                     {"Count the games where the answer is yes.", "sql",
                      sql("SELECT COUNT(*) AS num_wins FROM r2 WHERE won = 'yes'")}},
                    {{"team", team14}});
  flaw(r14, FailureCategory::kDataMisunderstanding,
       plan_only({"Select the team " + team14 + " from the teams table.",
                  "Output its championships as the number of games won."}));
  auto& r15 = b.add("rotowire-15", "rotowire", "In how many games did the winning team score more than 110 points?",
                    V, M, reports,
                    {{"Extract from every game report how many points the winning team scored.", "text_qa",
                      tqa("game_reports", kWinnerPointsQuestion, "winner_points")},
                     {"Count the games where those points are above 110.", "sql",
                      sql("SELECT COUNT(*) AS num_games FROM r1 WHERE CAST(winner_points AS INTEGER) > 110")}});
  flaw(r15, FailureCategory::kImpossibleActions,
       plan_only({"It is impossible to answer this query because the points of the winning team are not recorded."}));
  const auto& game16 = d.games[2].id;
  b.add("rotowire-16", "rotowire", "Which team won " + game16 + "?", V, M, reports,
        {{"Keep only the row whose game_id is " + game16 + ".", "sql",
          sql("SELECT * FROM game_reports WHERE game_id = '" + game16 + "'")},
         {"Extract from the game report which team won the game.", "text_qa", tqa("r1", kWinnerQuestion, "winner")},
         {"Output the winner.", "sql", sql("SELECT winner FROM r2")}},
        {{"game", game16}});
  auto& r17 = b.add("rotowire-17", "rotowire",
                    "For every team, what is the highest number of points they scored in a game?", T, M, teams_reports,
                    {{"Join the teams table with the game reports.", "sql",
                      sql("SELECT * FROM teams CROSS JOIN game_reports")},
                     {"Extract from every game report how many points the team scored.", "text_qa",
                      tqa("r1", points_q, "points")},
                     {"Compute the highest number of points per team.", "sql",
                      sql("SELECT name, MAX(CAST(points AS INTEGER)) AS max_points FROM r2 GROUP BY name")}});
  flaw(r17, FailureCategory::kIllogicalMissingSteps,
       plan_only({"Extract from every game report how many points each team scored.",
                  "Compute the highest number of points per team."}));
  auto& r18 = b.add("rotowire-18", "rotowire", "How many games did each team lose?", T, M, teams_reports,
                    {{"Join the teams table with the game reports.", "sql",
                      sql("SELECT * FROM teams CROSS JOIN game_reports")},
                     {"Extract from every game report whether the team lost.", "text_qa", tqa("r1", lost_q, "lost")},
                     {"Count the games where the answer is yes per team.", "sql",
                      sql("SELECT name, SUM(CASE WHEN lost = 'yes' THEN 1 ELSE 0 END) AS num_losses FROM r2 "
                          "GROUP BY name")}});
  {
    CaseScript s = plan_only({"Count the lost games of each team using the teams table.", "Output the counts."});
    s["mapping"] = oj::array({mapping_response("sql", sql("SELECT name, COUNT(*) AS num_losses FROM teams GROUP BY name")),
                              mapping_response("sql", sql("SELECT * FROM r1"))});
    flaw(r18, FailureCategory::kDataMisunderstanding, s);
  }
  auto& r19 = b.add("rotowire-19", "rotowire", "List the winner of every game.", T, M, reports,
                    {{"Extract from every game report which team won the game.", "text_qa",
                      tqa("game_reports", kWinnerQuestion, "winner")},
                     {"Output the game id and the winner.", "sql",
                      sql("SELECT game_id, winner FROM r1 ORDER BY game_id")}});
  flaw(r19, FailureCategory::kDataMisunderstanding,
       plan_only({"Select the team with the most championships as the winner of every game."}));
  b.add("rotowire-20", "rotowire", "For every team of the Eastern conference, how many games did they win?", T, M,
        teams_reports,
        {{"Join the teams of the Eastern conference with the game reports.", "sql",
          sql("SELECT * FROM teams CROSS JOIN game_reports WHERE conference = 'Eastern'")},
         {"Extract from every game report whether the team won.", "text_qa", tqa("r1", won_q, "won")},
         {"Count the games where the answer is yes per team.", "sql",
          sql("SELECT name, SUM(CASE WHEN won = 'yes' THEN 1 ELSE 0 END) AS num_wins FROM r2 GROUP BY name")}});
  auto& r21 = b.add("rotowire-21", "rotowire", "Plot the highest number of points each team scored in a game.", P, M,
                    teams_reports,
                    {{"Join the teams table with the game reports.", "sql",
                      sql("SELECT * FROM teams CROSS JOIN game_reports")},
                     {"Extract from every game report how many points the team scored.", "text_qa",
                      tqa("r1", points_q, "points")},
                     {"Compute the highest number of points per team.", "sql",
                      sql("SELECT name, MAX(CAST(points AS INTEGER)) AS max_points FROM r2 GROUP BY name")},
                     {"Plot the highest points per team as a bar chart.", "plot",
                      plot("r3", "name", "max_points", "Highest points per team")}});
  flaw(r21, FailureCategory::kIllogicalMissingSteps,
       plan_only({"Extract from every game report how many points each team scored.",
                  "Plot the highest points per team as a bar chart."}));
  auto& r22 = b.add("rotowire-22", "rotowire", "Plot the number of games won by each team.", P, M, teams_reports,
                    {{"Join the teams table with the game reports.", "sql",
                      sql("SELECT * FROM teams CROSS JOIN game_reports")},
                     {"Extract from every game report whether the team won.", "text_qa", tqa("r1", won_q, "won")},
                     {"Count the games where the answer is yes per team.", "sql",
                      sql("SELECT name, SUM(CASE WHEN won = 'yes' THEN 1 ELSE 0 END) AS num_wins FROM r2 GROUP BY name")},
                     {"Plot the wins per team as a bar chart.", "plot",
                      plot("r3", "name", "num_wins", "Games won per team")}});
  flaw(r22, FailureCategory::kDataMisunderstanding,
       plan_only({"Use the championships column of the teams table as the wins of every team.",
                  "Plot the wins per team as a bar chart."}));
  b.add("rotowire-23", "rotowire", "Plot the total number of points scored in each game.", P, M, reports,
        {{"Extract from every game report how many points were scored in total.", "text_qa",
          tqa("game_reports", kTotalPointsQuestion, "total_points")},
         {"Convert the answers to integers.", "sql",
          sql("SELECT game_id, CAST(total_points AS INTEGER) AS total_points FROM r1")},
         {"Plot the points per game as a bar chart.", "plot",
          plot("r2", "game_id", "total_points", "Total points per game")}});
  b.add("rotowire-24", "rotowire", "Plot the number of losses per conference.", P, M, teams_reports,
        {{"Join the teams table with the game reports.", "sql", sql("SELECT * FROM teams CROSS JOIN game_reports")},
         {"Extract from every game report whether the team lost.", "text_qa", tqa("r1", lost_q, "lost")},
         {"Count the games where the answer is yes per conference.", "sql",
          sql("SELECT conference, SUM(CASE WHEN lost = 'yes' THEN 1 ELSE 0 END) AS num_losses FROM r2 "
              "GROUP BY conference")},
         {"Plot the losses per conference as a bar chart.", "plot",
          plot("r3", "conference", "num_losses", "Losses per conference")}});
}

}  // namespace

std::vector<SuiteEntry> build_suite(const FixtureData& data) {
  Builder b;
  artwork_cases(data, b);
  rotowire_cases(data, b);
  return std::move(b.entries);
}

}  // namespace detail
}  // namespace lakeq::bench
