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


// Command-line front end. Links only against the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lakeq/lakeq.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string root;
  std::string query;
  std::string format = "text";
  std::string backend;
  std::string script;
  std::string transcript;
  std::string record;
  std::string qa_url;
  std::string datasets;
  bool no_prune = false;
  std::size_t max_retries = 3;
  std::size_t discovery_k = 2;
  std::string out_dir = ".";
  std::uint64_t seed = 7;
  std::string suite;
  std::string scripts;
  std::string flawed;
  std::string transcripts;
  std::string record_dir;
  bool remote = false;
  std::size_t workers = 1;
};

// Usage errors carry exit code 2; everything else maps to 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  lakeq_status status;
  ApiError(lakeq_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(lakeq_status status, const char* what) {
  if (status != LAKEQ_OK) {
    throw ApiError(status, std::string(what) + ": " + lakeq_last_error() + " [" + lakeq_status_name(status) + "]");
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using CatalogPtr = std::unique_ptr<lakeq_catalog, Deleter<lakeq_catalog, lakeq_catalog_free>>;
using LlmPtr = std::unique_ptr<lakeq_llm, Deleter<lakeq_llm, lakeq_llm_free>>;
using QaPtr = std::unique_ptr<lakeq_qa, Deleter<lakeq_qa, lakeq_qa_free>>;
using OutcomePtr = std::unique_ptr<lakeq_outcome, Deleter<lakeq_outcome, lakeq_outcome_free>>;
using StringPtr = std::unique_ptr<char, Deleter<char, lakeq_string_free>>;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiError(LAKEQ_ERR_IO, "cannot write " + path.string());
  out << text;
}

CatalogPtr open_catalog(const Options& o) {
  lakeq_catalog* c = nullptr;
  check(lakeq_catalog_open(o.root.c_str(), &c), "opening catalog");
  return CatalogPtr(c);
}

int cmd_catalog(const Options& o) {
  auto catalog = open_catalog(o);
  char* text = nullptr;
  check(lakeq_catalog_describe(catalog.get(), o.format == "json", &text), "describing catalog");
  StringPtr owned(text);
  std::cout << text;
  return kExitOk;
}

// Backend resolution. The chat client pair is (client used for the run,
// recorder whose transcript is saved afterwards or null).
struct Backend {
  LlmPtr inner;
  LlmPtr client;
  std::string record_path;
};

Backend make_backend(const Options& o, bool replay_only) {
  std::string kind = o.backend;
  if (replay_only) {
    if (!kind.empty() && kind != "replay") throw UsageError("replay only supports the replay backend");
    kind = "replay";
  }
  if (kind.empty()) kind = !o.script.empty() ? "scripted" : !o.transcript.empty() ? "replay" : "remote";
  Backend b;
  lakeq_llm* raw = nullptr;
  if (kind == "replay") {
    if (o.transcript.empty()) throw UsageError("the replay backend requires --transcript");
    if (!o.record.empty()) throw UsageError("--record requires the remote or scripted backend");
    check(lakeq_llm_replay(o.transcript.c_str(), &raw), "loading transcript");
    b.client.reset(raw);
    return b;
  }
  if (kind == "scripted") {
    if (o.script.empty()) throw UsageError("the scripted backend requires --script");
    check(lakeq_llm_scripted_file(o.script.c_str(), &raw), "loading script");
    b.record_path = o.record.empty() ? o.transcript : o.record;
  } else if (kind == "remote") {
    check(lakeq_llm_remote(&raw), "configuring remote backend");
    // Every live run with a transcript path is recorded.
    b.record_path = o.record.empty() ? o.transcript : o.record;
  } else {
    throw UsageError("unknown backend '" + kind + "'");
  }
  b.inner.reset(raw);
  if (b.record_path.empty()) {
    b.client = std::move(b.inner);
    return b;
  }
  lakeq_llm* rec = nullptr;
  check(lakeq_llm_recorder(b.inner.get(), &rec), "creating recorder");
  b.client.reset(rec);
  return b;
}

QaPtr make_qa(const Options& o, lakeq_catalog* catalog) {
  lakeq_qa* qa = nullptr;
  if (o.qa_url.empty()) {
    check(lakeq_qa_fixture(catalog, &qa), "loading fixture answers");
  } else {
    check(lakeq_qa_http(o.qa_url.c_str(), catalog, &qa), "configuring QA endpoint");
  }
  return QaPtr(qa);
}

json operators_json(const lakeq_outcome* outcome) {
  json ops = json::array();
  std::string list = lakeq_outcome_operators(outcome);
  std::size_t start = 0;
  while (!list.empty() && start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string::npos) comma = list.size();
    ops.push_back(list.substr(start, comma - start));
    start = comma + 1;
  }
  return ops;
}

enum class Mode { kQuery, kExplain, kReplay };

int cmd_query(const Options& o, Mode mode) {
  auto catalog = open_catalog(o);
  auto backend = make_backend(o, mode == Mode::kReplay);
  auto qa = make_qa(o, catalog.get());

  lakeq_query_options qo;
  lakeq_query_options_init(&qo);
  qo.datasets = o.datasets.empty() ? nullptr : o.datasets.c_str();
  qo.prune = o.no_prune ? 0 : 1;
  qo.max_retries = o.max_retries;
  qo.discovery_k = o.discovery_k;

  lakeq_outcome* raw = nullptr;
  auto status = lakeq_query(catalog.get(), backend.client.get(), qa.get(), o.query.c_str(), &qo, &raw);
  if (!raw) check(status, "running query");
  OutcomePtr outcome(raw);

  if (!backend.record_path.empty()) {
    check(lakeq_llm_save_transcript(backend.client.get(), backend.record_path.c_str()), "saving transcript");
    std::cerr << "recorded transcript to " << backend.record_path << "\n";
  }

  const bool as_json = o.format == "json";
  if (status != LAKEQ_OK) {
    std::cerr << "error: " << lakeq_outcome_error(outcome.get()) << " [" << lakeq_status_name(status) << "]\n";
    if (as_json) {
      json j;
      j["status"] = "error";
      j["code"] = lakeq_status_name(status);
      j["error"] = lakeq_outcome_error(outcome.get());
      j["trace"] = json::parse(lakeq_outcome_trace_json(outcome.get()));
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << lakeq_outcome_explain(outcome.get());
    }
    return kExitFailure;
  }

  if (mode == Mode::kExplain) {
    if (as_json) {
      std::cout << lakeq_outcome_trace_json(outcome.get());
    } else {
      std::cout << lakeq_outcome_explain(outcome.get());
    }
    return kExitOk;
  }

  json artifacts = json::object();
  if (std::string(lakeq_outcome_kind(outcome.get())) == "plot") {
    fs::path dir = o.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_file(dir / "plot.json", lakeq_outcome_plot_json(outcome.get()));
    write_file(dir / "plot.svg", lakeq_outcome_plot_svg(outcome.get()));
    artifacts["plot_json"] = (dir / "plot.json").string();
    artifacts["plot_svg"] = (dir / "plot.svg").string();
  }

  if (as_json) {
    json j;
    j["status"] = "ok";
    j["kind"] = lakeq_outcome_kind(outcome.get());
    j["result"] = json::parse(lakeq_outcome_result_json(outcome.get()));
    j["digest"] = lakeq_outcome_digest(outcome.get());
    j["operators"] = operators_json(outcome.get());
    j["artifacts"] = artifacts;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << lakeq_outcome_result_text(outcome.get());
    for (const auto& [name, path] : artifacts.items()) std::cout << "wrote " << path.get<std::string>() << "\n";
  }
  return kExitOk;
}

int cmd_bench(const Options& o) {
  lakeq_bench_options bo;
  lakeq_bench_options_init(&bo);
  bo.fixtures_root = o.root.c_str();
  bo.suite_path = o.suite.c_str();
  int sources = !o.transcripts.empty() + o.remote + !o.scripts.empty();
  if (sources != 1) throw UsageError("bench needs exactly one of --transcripts, --remote or --scripts");
  if (!o.flawed.empty() && o.scripts.empty()) throw UsageError("--flawed requires --scripts");
  if (!o.transcripts.empty()) bo.transcript_dir = o.transcripts.c_str();
  bo.remote = o.remote ? 1 : 0;
  if (!o.scripts.empty()) bo.scripts_path = o.scripts.c_str();
  if (!o.flawed.empty()) bo.flawed_path = o.flawed.c_str();
  if (!o.record_dir.empty()) {
    if (!o.transcripts.empty()) throw UsageError("--record-dir requires the remote or scripted backend");
    bo.record_dir = o.record_dir.c_str();
  }
  bo.workers = o.workers;
  bo.max_retries = o.max_retries;
  char* report_json = nullptr;
  char* report_text = nullptr;
  check(lakeq_bench_run(&bo, &report_json, &report_text), "running benchmark");
  StringPtr j(report_json), t(report_text);
  std::cout << (o.format == "json" ? report_json : report_text);
  return kExitOk;
}

int cmd_fixtures(const Options& o) {
  check(lakeq_fixtures_write(o.seed, o.root.c_str()), "writing fixtures");
  if (o.format == "json") {
    std::cout << json{{"status", "ok"}, {"out_dir", o.root}, {"seed", o.seed}}.dump(2) << "\n";
  } else {
    std::cout << "wrote fixtures (seed " << o.seed << ") to " << o.root << "\n";
  }
  return kExitOk;
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

void add_query_flags(CLI::App* cmd, Options& o, bool replay) {
  cmd->add_option("root", o.root, "Catalog root (directory holding catalog.json)")->required();
  cmd->add_option("query", o.query, "Natural-language query")->required();
  add_format(cmd, o);
  if (!replay) {
    cmd->add_option("--backend", o.backend, "Chat backend")->check(CLI::IsMember({"remote", "replay", "scripted"}));
    cmd->add_option("--script", o.script, "Scripted responses (JSON)");
    cmd->add_option("--record", o.record, "Write a transcript of this run");
  }
  cmd->add_option("--transcript", o.transcript, "Transcript to replay, or to record with a live backend")
      ->required(replay);
  cmd->add_option("--qa-url", o.qa_url, "HTTP question-answering endpoint (default: fixture answers)");
  cmd->add_option("--datasets", o.datasets, "Comma-separated datasets, skipping discovery");
  cmd->add_flag("--no-prune", o.no_prune, "Do not prune table columns");
  cmd->add_option("--max-retries", o.max_retries, "Recovery attempts");
  cmd->add_option("--discovery-k", o.discovery_k, "Datasets kept by discovery");
  cmd->add_option("--out-dir", o.out_dir, "Directory for plot artifacts");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lakeq: natural-language queries over multi-modal data lakes", "lakeq"};
  app.set_version_flag("--version", lakeq_version());
  app.require_subcommand(1);
  Options o;

  auto* catalog = app.add_subcommand("catalog", "List datasets and columns");
  catalog->add_option("root", o.root, "Catalog root")->required();
  add_format(catalog, o);

  auto* query = app.add_subcommand("query", "Run a query and print its result");
  add_query_flags(query, o, false);
  auto* explain = app.add_subcommand("explain", "Run a query and print the plan trace");
  add_query_flags(explain, o, false);
  auto* replay = app.add_subcommand("replay", "Rerun a query from a recorded transcript");
  add_query_flags(replay, o, true);

  auto* bench = app.add_subcommand("bench", "Run the benchmark suite and print the report");
  bench->add_option("root", o.root, "Fixture root (holding one directory per dataset)")->required();
  bench->add_option("--suite", o.suite, "Suite file")->required();
  bench->add_option("--transcripts", o.transcripts, "Directory of <case id>.jsonl transcripts");
  bench->add_option("--scripts", o.scripts, "Scripted responses per case");
  bench->add_option("--flawed", o.flawed, "Flawed scripts overriding --scripts");
  bench->add_flag("--remote", o.remote, "Use the remote chat backend");
  bench->add_option("--record-dir", o.record_dir, "Save each case's transcript as <dir>/<case id>.jsonl");
  bench->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--max-retries", o.max_retries, "Recovery attempts");
  add_format(bench, o);

  auto* fixtures = app.add_subcommand("fixtures", "Generate the benchmark fixtures");
  fixtures->add_option("out_dir", o.root, "Output directory")->required();
  fixtures->add_option("--seed", o.seed, "Generator seed");
  add_format(fixtures, o);

  if (argc < 2) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    if (catalog->parsed()) return cmd_catalog(o);
    if (query->parsed()) return cmd_query(o, Mode::kQuery);
    if (explain->parsed()) return cmd_query(o, Mode::kExplain);
    if (replay->parsed()) return cmd_query(o, Mode::kReplay);
    if (bench->parsed()) return cmd_bench(o);
    if (fixtures->parsed()) return cmd_fixtures(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status == LAKEQ_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
