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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "bench/bench.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "operators/operators.hpp"

namespace lakeq::bench {

using oj = nlohmann::ordered_json;

namespace {

struct IntentRule {
  const char* label;
  std::vector<std::string> tokens;
};

// Checked in order; the first rule with a matching token wins.
const std::vector<IntentRule>& intent_rules() {
  static const std::vector<IntentRule> kRules = {
      {"plot", {"plot", "chart", "visualize", "visualise", "graph", "diagram"}},
      {"join", {"join", "combine", "merge", "cross"}},
      {"image_qa", {"image", "picture", "photo", "visual"}},
      {"text_qa", {"report", "document", "text", "article", "read"}},
      {"aggregate", {"count", "number", "maximum", "minimum", "max", "min", "average", "mean", "sum", "total",
                     "highest", "lowest", "most", "fewest", "group", "per", "aggregate"}},
      {"transform", {"century", "decade", "compute", "derive", "convert", "calculate", "extract", "transform",
                     "python", "udf"}},
      {"filter", {"select", "filter", "keep", "only", "where", "exclude", "remove", "restrict"}},
  };
  return kRules;
}

const std::vector<std::string>& impossible_phrases() {
  static const std::vector<std::string> kPhrases = {
      "cannot", "can not", "can't", "impossible", "not possible", "not available", "no information",
      "unable", "does not contain", "not recorded"};
  return kPhrases;
}

std::set<std::string> modalities(const std::vector<std::string>& intents) {
  std::set<std::string> out;
  for (const auto& i : intents) {
    if (i == "image_qa" || i == "text_qa") out.insert(i);
  }
  return out;
}

bool declares_impossible(const LogicalPlan& plan) {
  for (const auto& s : plan.steps) {
    auto lower = to_lower(s.description);
    for (const auto& p : impossible_phrases()) {
      if (lower.find(p) != std::string::npos) return true;
    }
  }
  return false;
}

double pct(std::size_t n, std::size_t total) {
  if (total == 0) return 0;
  return std::round(1000.0 * static_cast<double>(n) / static_cast<double>(total)) / 10.0;
}

std::string pct_text(std::size_t n, std::size_t total) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f%%", pct(n, total));
  return buf;
}

std::string group_title(const std::string& g) {
  if (g == "single") return "Single modality";
  if (g == "multi") return "Multiple modalities";
  if (g == "value") return "Single value";
  if (g == "table") return "Table";
  if (g == "plot") return "Plot";
  if (g == "all") return "All";
  std::string t = g;
  if (!t.empty()) t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  return t + " overall";
}

}  // namespace

std::string step_intent(std::string_view description) {
  auto tokens = word_tokens(description);
  std::set<std::string> present(tokens.begin(), tokens.end());
  for (const auto& rule : intent_rules()) {
    for (const auto& t : rule.tokens) {
      if (present.count(t)) return rule.label;
    }
  }
  return "project";
}

std::vector<std::string> plan_intents(const LogicalPlan& plan) {
  std::vector<std::string> out;
  for (const auto& s : plan.steps) out.push_back(step_intent(s.description));
  return out;
}

std::vector<std::string> attempted_ops(const Trace& trace) {
  std::vector<std::string> ops;
  for (const auto& r : trace.executed) {
    // A step at or before the current end means execution was rewound.
    if (r.step.logical_index >= 1 && r.step.logical_index <= ops.size()) ops.resize(r.step.logical_index - 1);
    ops.push_back(r.step.op);
  }
  if (!trace.errors.empty()) {
    const auto& last = trace.errors.back();
    if (!last.op.empty() && last.step_index == ops.size() + 1) ops.push_back(last.op);
  }
  return ops;
}

FailureCategory categorize_failure(const Trace& trace, const QueryCase& gold) {
  if (trace.plans.empty() || declares_impossible(trace.plans.back())) {
    return FailureCategory::kImpossibleActions;
  }
  auto intents = plan_intents(trace.plans.back());
  if (modalities(intents) != modalities(gold.gold_intents)) return FailureCategory::kDataMisunderstanding;
  if (intents != gold.gold_intents) return FailureCategory::kIllogicalMissingSteps;
  auto ops = attempted_ops(trace);
  bool agrees = ops.size() <= gold.gold_ops.size() &&
                std::equal(ops.begin(), ops.end(), gold.gold_ops.begin());
  return agrees ? FailureCategory::kWrongArguments : FailureCategory::kWrongTool;
}

CaseResult evaluate_case(const QueryCase& c, const QueryOutcome& outcome) {
  CaseResult r;
  r.id = c.id;
  if (!outcome.trace.plans.empty()) r.intents = plan_intents(outcome.trace.plans.back());
  r.logical_correct = !outcome.trace.plans.empty() && r.intents == c.gold_intents;
  if (outcome.ok()) {
    for (const auto& s : outcome.result->physical_plan) r.ops.push_back(s.op);
    r.digest = outcome.result->digest();
    r.physical_correct = r.ops == c.gold_ops && r.digest == c.gold_digest;
  } else {
    r.ops = attempted_ops(outcome.trace);
    r.error = outcome.error;
  }
  r.category = r.logical_correct && r.physical_correct ? FailureCategory::kCorrect
                                                       : categorize_failure(outcome.trace, c);
  return r;
}

BenchReport make_report(const std::vector<QueryCase>& cases, std::vector<CaseResult> results) {
  if (cases.size() != results.size()) fail(ErrorKind::kInternal, "bench: one result per case expected");
  BenchReport report;
  std::vector<std::string> datasets;
  for (const auto& c : cases) {
    if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end()) datasets.push_back(c.dataset);
  }
  std::sort(datasets.begin(), datasets.end());
  std::vector<std::string> order = datasets;
  for (const char* g : {"single", "multi", "value", "table", "plot", "all"}) order.push_back(g);
  for (const auto& g : order) report.groups.push_back({g, 0, 0, 0});
  for (auto cat : all_categories()) report.categories[cat] = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto& r = results[i];
    for (auto& g : report.groups) {
      bool member = g.group == "all" || g.group == c.dataset || g.group == to_string(c.modality) ||
                    g.group == to_string(c.output);
      if (!member) continue;
      ++g.cases;
      g.logical += r.logical_correct ? 1 : 0;
      g.physical += r.physical_correct ? 1 : 0;
    }
    ++report.categories[r.category];
  }
  report.cases = std::move(results);
  return report;
}

oj BenchReport::to_json() const {
  oj j;
  j["cases"] = cases.size();
  auto& groups_j = j["groups"] = oj::array();
  for (const auto& g : groups) {
    groups_j.push_back({{"group", g.group},
                        {"cases", g.cases},
                        {"logical", g.logical},
                        {"physical", g.physical},
                        {"logical_pct", pct(g.logical, g.cases)},
                        {"physical_pct", pct(g.physical, g.cases)}});
  }
  auto& cats = j["categories"] = oj::object();
  for (const auto& [cat, n] : categories) cats[to_string(cat)] = n;
  auto& res = j["results"] = oj::array();
  for (const auto& r : cases) {
    oj x;
    x["id"] = r.id;
    x["logical_correct"] = r.logical_correct;
    x["physical_correct"] = r.physical_correct;
    x["category"] = to_string(r.category);
    x["intents"] = r.intents;
    x["ops"] = r.ops;
    x["digest"] = r.digest;
    if (!r.error.empty()) x["error"] = r.error;
    res.push_back(std::move(x));
  }
  return j;
}

std::string BenchReport::render_table() const {
  char line[128];
  std::string out;
  std::snprintf(line, sizeof line, "%-22s %9s %9s %6s\n", "Plan type", "logical", "physical", "cases");
  out += line;
  out += std::string(49, '-') + "\n";
  for (const auto& g : groups) {
    std::snprintf(line, sizeof line, "%-22s %9s %9s %6zu\n", group_title(g.group).c_str(),
                  pct_text(g.logical, g.cases).c_str(), pct_text(g.physical, g.cases).c_str(), g.cases);
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof line, "%-28s %-9s %6s\n", "Category", "phase", "count");
  out += line;
  out += std::string(45, '-') + "\n";
  for (const auto& [cat, n] : categories) {
    const char* phase = cat == FailureCategory::kCorrect ? "-"
                        : (cat == FailureCategory::kWrongArguments || cat == FailureCategory::kWrongTool)
                            ? "physical"
                            : "logical";
    std::snprintf(line, sizeof line, "%-28s %-9s %6zu\n", to_string(cat), phase, n);
    out += line;
  }
  return out;
}

BenchReport run_suite(const std::vector<QueryCase>& cases, const std::filesystem::path& root,
                      const BackendFactory& backend, const SuiteOptions& options) {
  struct Lake {
    Catalog catalog;
    std::unique_ptr<FixtureQaBackend> qa;
  };
  std::map<std::string, Lake> lakes;
  for (const auto& c : cases) {
    if (lakes.count(c.dataset)) continue;
    Lake lake;
    lake.catalog = load_catalog(root / c.dataset);
    lake.qa = std::make_unique<FixtureQaBackend>(lake.catalog);
    lakes.emplace(c.dataset, std::move(lake));
  }
  std::vector<CaseResult> results(cases.size());
  auto run_one = [&](std::size_t i) {
    const auto& c = cases[i];
    QueryOutcome outcome;
    try {
      auto& lake = lakes.at(c.dataset);
      auto llm = backend(c);
      if (!llm) fail(ErrorKind::kInvalidArgument, "no backend for case '" + c.id + "'");
      outcome = run_query(c.query, lake.catalog, *llm, *lake.qa, case_config(c, options.max_retries));
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    results[i] = evaluate_case(c, outcome);
  };
  std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, cases.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return make_report(cases, std::move(results));
}

}  // namespace lakeq::bench
