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


#include "lakeq/lakeq.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "bench/bench.hpp"
#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "common/log.hpp"
#include "common/text.hpp"
#include "engine/executor.hpp"
#include "llm/llm.hpp"
#include "operators/operators.hpp"

struct lakeq_catalog {
  lakeq::Catalog catalog;
};

struct lakeq_llm {
  std::unique_ptr<lakeq::ChatClient> client;
  lakeq::RecordingChatClient* recorder = nullptr;  // set when client records
};

struct lakeq_qa {
  std::unique_ptr<lakeq::QaBackend> backend;
};

struct lakeq_outcome {
  lakeq_status status = LAKEQ_OK;
  std::string error;
  std::string kind;
  std::string result_json;
  std::string digest;
  std::string result_text;
  std::string operators;
  std::string trace_json;
  std::string explain;
  std::string plot_json;
  std::string plot_svg;
};

namespace {

thread_local std::string g_last_error;

lakeq_status status_of(lakeq::ErrorKind kind) {
  using lakeq::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return LAKEQ_ERR_INVALID_ARGUMENT;
    case ErrorKind::kIo: return LAKEQ_ERR_IO;
    case ErrorKind::kParse: return LAKEQ_ERR_PARSE;
    case ErrorKind::kBinding: return LAKEQ_ERR_BINDING;
    case ErrorKind::kType: return LAKEQ_ERR_TYPE;
    case ErrorKind::kSecurity: return LAKEQ_ERR_SECURITY;
    case ErrorKind::kBackend: return LAKEQ_ERR_BACKEND;
    case ErrorKind::kReplayMiss: return LAKEQ_ERR_REPLAY_MISS;
    case ErrorKind::kExhausted: return LAKEQ_ERR_EXHAUSTED;
    case ErrorKind::kOperator: return LAKEQ_ERR_OPERATOR;
    case ErrorKind::kQueryFailed: return LAKEQ_ERR_QUERY_FAILED;
    case ErrorKind::kInternal: return LAKEQ_ERR_INTERNAL;
  }
  return LAKEQ_ERR_INTERNAL;
}

lakeq_status set_error(lakeq_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, turning exceptions into status codes.
template <typename F>
lakeq_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const lakeq::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LAKEQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LAKEQ_ERR_INTERNAL, e.what());
  }
}

char* owned_copy(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

#define LAKEQ_REQUIRE(cond, what) \
  if (!(cond)) return set_error(LAKEQ_ERR_INVALID_ARGUMENT, what)

std::string render_table(const lakeq::Relation& rel) {
  std::vector<std::size_t> width(rel.arity(), 0);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header;
  for (std::size_t c = 0; c < rel.arity(); ++c) {
    header.push_back(rel.column(c).name);
    width[c] = header[c].size();
  }
  for (const auto& row : rel.rows()) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line.push_back(lakeq::render_cell(row[c]));
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) s += " | ";
      s += line[c];
      if (c + 1 < line.size()) s += std::string(width[c] - line[c].size(), ' ');
    }
    return s + "\n";
  };
  std::string out = emit(header);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c) rule += "-+-";
    rule += std::string(width[c], '-');
  }
  out += rule + "\n";
  for (const auto& line : cells) out += emit(line);
  out += "(" + std::to_string(rel.size()) + " rows)\n";
  return out;
}

std::string render_result(const lakeq::QueryResult& r) {
  switch (r.kind) {
    case lakeq::ResultKind::kScalar: return lakeq::render_cell(r.scalar) + "\n";
    case lakeq::ResultKind::kTable: return render_table(r.table);
    case lakeq::ResultKind::kPlot:
      return r.plot->kind + " plot of " + r.plot->y + " by " + r.plot->x + ", " +
             std::to_string(r.plot->data.size()) + " points\n";
  }
  return "";
}

std::vector<std::string> split_names(const char* list) {
  std::vector<std::string> out;
  if (!list) return out;
  std::string cur;
  for (const char* p = list;; ++p) {
    if (*p == ',' || *p == '\0') {
      auto t = std::string(lakeq::trim(cur));
      if (!t.empty()) out.push_back(t);
      cur.clear();
      if (*p == '\0') break;
    } else {
      cur += *p;
    }
  }
  return out;
}

// Records the wrapped client's exchanges and saves them when the case ends.
class SavingRecorder : public lakeq::ChatClient {
 public:
  SavingRecorder(std::unique_ptr<lakeq::ChatClient> inner, std::filesystem::path path)
      : inner_(std::move(inner)), recorder_(*inner_), path_(std::move(path)) {}
  ~SavingRecorder() override {
    try {
      lakeq::save_transcript(recorder_.transcript(), path_);
    } catch (const std::exception& e) {
      lakeq::logger().error("cannot save transcript {}: {}", path_.string(), e.what());
    }
  }
  std::string complete(const lakeq::ChatRequest& request) override { return recorder_.complete(request); }

 private:
  std::unique_ptr<lakeq::ChatClient> inner_;
  lakeq::RecordingChatClient recorder_;
  std::filesystem::path path_;
};

}  // namespace

extern "C" {

const char* lakeq_version(void) { return "0.1.0"; }

const char* lakeq_status_name(lakeq_status status) {
  switch (status) {
    case LAKEQ_OK: return "ok";
    case LAKEQ_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LAKEQ_ERR_IO: return "io";
    case LAKEQ_ERR_PARSE: return "parse";
    case LAKEQ_ERR_BINDING: return "binding";
    case LAKEQ_ERR_TYPE: return "type";
    case LAKEQ_ERR_SECURITY: return "security";
    case LAKEQ_ERR_BACKEND: return "backend";
    case LAKEQ_ERR_REPLAY_MISS: return "replay_miss";
    case LAKEQ_ERR_EXHAUSTED: return "exhausted";
    case LAKEQ_ERR_OPERATOR: return "operator";
    case LAKEQ_ERR_QUERY_FAILED: return "query_failed";
    case LAKEQ_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lakeq_last_error(void) { return g_last_error.c_str(); }

void lakeq_string_free(char* s) { std::free(s); }

lakeq_status lakeq_catalog_open(const char* root, lakeq_catalog** out) {
  LAKEQ_REQUIRE(root && out, "lakeq_catalog_open: root and out are required");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<lakeq_catalog>();
    c->catalog = lakeq::load_catalog(root);
    *out = c.release();
    return LAKEQ_OK;
  });
}

void lakeq_catalog_free(lakeq_catalog* catalog) { delete catalog; }

lakeq_status lakeq_catalog_describe(const lakeq_catalog* catalog, int as_json, char** out) {
  LAKEQ_REQUIRE(catalog && out, "lakeq_catalog_describe: catalog and out are required");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    if (as_json) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& d : catalog->catalog.datasets()) {
        nlohmann::ordered_json j;
        j["name"] = d.name;
        j["kind"] = lakeq::to_string(d.kind);
        j["rows"] = d.row_count;
        auto& cols = j["columns"] = nlohmann::ordered_json::array();
        for (const auto& c : d.columns) {
          cols.push_back({{"name", c.name}, {"type", lakeq::to_string(c.semantic_type)}, {"samples", c.samples}});
        }
        arr.push_back(std::move(j));
      }
      text = arr.dump(2) + "\n";
    } else {
      for (const auto& d : catalog->catalog.datasets()) {
        text += d.name + " (" + lakeq::to_string(d.kind) + ", " + std::to_string(d.row_count) + " rows)\n";
        for (const auto& c : d.columns) {
          text += "  " + c.name + ": " + lakeq::to_string(c.semantic_type);
          if (!c.samples.empty()) text += "  e.g. " + lakeq::join(c.samples, ", ");
          text += "\n";
        }
      }
    }
    *out = owned_copy(text);
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_llm_scripted_file(const char* path, lakeq_llm** out) {
  LAKEQ_REQUIRE(path && out, "lakeq_llm_scripted_file: path and out are required");
  *out = nullptr;
  return guarded([&] {
    auto l = std::make_unique<lakeq_llm>();
    l->client = lakeq::ScriptedChatClient::from_file(path);
    *out = l.release();
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_llm_scripted_json(const char* json, lakeq_llm** out) {
  LAKEQ_REQUIRE(json && out, "lakeq_llm_scripted_json: json and out are required");
  *out = nullptr;
  return guarded([&] {
    auto l = std::make_unique<lakeq_llm>();
    l->client = lakeq::ScriptedChatClient::from_json(json);
    *out = l.release();
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_llm_replay(const char* transcript_path, lakeq_llm** out) {
  LAKEQ_REQUIRE(transcript_path && out, "lakeq_llm_replay: transcript path and out are required");
  *out = nullptr;
  return guarded([&] {
    auto l = std::make_unique<lakeq_llm>();
    l->client = std::make_unique<lakeq::ReplayChatClient>(lakeq::load_transcript(transcript_path));
    *out = l.release();
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_llm_remote(lakeq_llm** out) {
  LAKEQ_REQUIRE(out, "lakeq_llm_remote: out is required");
  *out = nullptr;
  return guarded([&] {
    auto config = lakeq::RemoteConfig::from_env();
    if (config.api_key.empty()) {
      lakeq::fail(lakeq::ErrorKind::kInvalidArgument,
                  "the remote backend needs LAKEQ_API_KEY or OPENAI_API_KEY");
    }
    auto l = std::make_unique<lakeq_llm>();
    l->client = std::make_unique<lakeq::RemoteChatClient>(std::move(config));
    *out = l.release();
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_llm_recorder(lakeq_llm* inner, lakeq_llm** out) {
  LAKEQ_REQUIRE(inner && out, "lakeq_llm_recorder: inner and out are required");
  *out = nullptr;
  return guarded([&] {
    auto l = std::make_unique<lakeq_llm>();
    auto rec = std::make_unique<lakeq::RecordingChatClient>(*inner->client);
    l->recorder = rec.get();
    l->client = std::move(rec);
    *out = l.release();
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_llm_save_transcript(const lakeq_llm* recorder, const char* path) {
  LAKEQ_REQUIRE(recorder && path, "lakeq_llm_save_transcript: recorder and path are required");
  LAKEQ_REQUIRE(recorder->recorder, "lakeq_llm_save_transcript: the backend does not record");
  return guarded([&] {
    lakeq::save_transcript(recorder->recorder->transcript(), path);
    return LAKEQ_OK;
  });
}

void lakeq_llm_free(lakeq_llm* llm) { delete llm; }

lakeq_status lakeq_qa_fixture(const lakeq_catalog* catalog, lakeq_qa** out) {
  LAKEQ_REQUIRE(catalog && out, "lakeq_qa_fixture: catalog and out are required");
  *out = nullptr;
  return guarded([&] {
    auto q = std::make_unique<lakeq_qa>();
    q->backend = std::make_unique<lakeq::FixtureQaBackend>(catalog->catalog);
    *out = q.release();
    return LAKEQ_OK;
  });
}

lakeq_status lakeq_qa_http(const char* url, const lakeq_catalog* catalog, lakeq_qa** out) {
  LAKEQ_REQUIRE(url && catalog && out, "lakeq_qa_http: url, catalog and out are required");
  *out = nullptr;
  return guarded([&] {
    auto q = std::make_unique<lakeq_qa>();
    q->backend = std::make_unique<lakeq::HttpQaBackend>(url, catalog->catalog.root());
    *out = q.release();
    return LAKEQ_OK;
  });
}

void lakeq_qa_free(lakeq_qa* qa) { delete qa; }

void lakeq_query_options_init(lakeq_query_options* options) {
  if (!options) return;
  options->datasets = nullptr;
  options->prune = 1;
  options->max_retries = lakeq::kDefaultMaxRetries;
  options->discovery_k = lakeq::kDefaultDiscoveryK;
}

lakeq_status lakeq_query(lakeq_catalog* catalog, lakeq_llm* llm, lakeq_qa* qa, const char* query,
                         const lakeq_query_options* options, lakeq_outcome** out) {
  LAKEQ_REQUIRE(catalog && llm && qa && query && out, "lakeq_query: catalog, llm, qa, query and out are required");
  *out = nullptr;
  return guarded([&] {
    lakeq::QueryConfig config;
    if (options) {
      config.datasets = split_names(options->datasets);
      config.prune = options->prune != 0;
      config.max_retries = options->max_retries;
      config.discovery_k = options->discovery_k;
    }
    auto outcome = lakeq::run_query(query, catalog->catalog, *llm->client, *qa->backend, config);
    auto o = std::make_unique<lakeq_outcome>();
    o->trace_json = outcome.trace.to_json().dump(2) + "\n";
    o->explain = lakeq::explain(outcome);
    if (outcome.ok()) {
      const auto& r = *outcome.result;
      o->status = LAKEQ_OK;
      o->kind = lakeq::to_string(r.kind);
      o->result_json = r.to_json().dump();
      o->digest = r.digest();
      o->result_text = render_result(r);
      std::vector<std::string> ops;
      for (const auto& s : r.physical_plan) ops.push_back(s.op);
      o->operators = lakeq::join(ops, ",");
      if (r.plot) {
        o->plot_json = lakeq::plot_to_json(*r.plot).dump(2) + "\n";
        o->plot_svg = lakeq::render_svg(*r.plot);
      }
    } else {
      o->status = status_of(outcome.error_kind);
      o->error = outcome.error;
      g_last_error = outcome.error;
    }
    auto status = o->status;
    *out = o.release();
    return status;
  });
}

lakeq_status lakeq_outcome_status(const lakeq_outcome* o) { return o ? o->status : LAKEQ_ERR_INVALID_ARGUMENT; }
const char* lakeq_outcome_error(const lakeq_outcome* o) { return o ? o->error.c_str() : ""; }
const char* lakeq_outcome_kind(const lakeq_outcome* o) { return o ? o->kind.c_str() : ""; }
const char* lakeq_outcome_result_json(const lakeq_outcome* o) { return o ? o->result_json.c_str() : ""; }
const char* lakeq_outcome_digest(const lakeq_outcome* o) { return o ? o->digest.c_str() : ""; }
const char* lakeq_outcome_result_text(const lakeq_outcome* o) { return o ? o->result_text.c_str() : ""; }
const char* lakeq_outcome_operators(const lakeq_outcome* o) { return o ? o->operators.c_str() : ""; }
const char* lakeq_outcome_trace_json(const lakeq_outcome* o) { return o ? o->trace_json.c_str() : ""; }
const char* lakeq_outcome_explain(const lakeq_outcome* o) { return o ? o->explain.c_str() : ""; }
const char* lakeq_outcome_plot_json(const lakeq_outcome* o) { return o ? o->plot_json.c_str() : ""; }
const char* lakeq_outcome_plot_svg(const lakeq_outcome* o) { return o ? o->plot_svg.c_str() : ""; }
void lakeq_outcome_free(lakeq_outcome* outcome) { delete outcome; }

lakeq_status lakeq_fixtures_write(uint64_t seed, const char* out_dir) {
  LAKEQ_REQUIRE(out_dir, "lakeq_fixtures_write: out_dir is required");
  return guarded([&] {
    lakeq::bench::write_fixtures(lakeq::bench::build_fixtures(seed), out_dir);
    return LAKEQ_OK;
  });
}

void lakeq_bench_options_init(lakeq_bench_options* options) {
  if (!options) return;
  std::memset(options, 0, sizeof *options);
  options->workers = 1;
  options->max_retries = lakeq::kDefaultMaxRetries;
}

lakeq_status lakeq_bench_run(const lakeq_bench_options* options, char** report_json, char** report_text) {
  LAKEQ_REQUIRE(options && options->fixtures_root && options->suite_path,
                "lakeq_bench_run: fixtures_root and suite_path are required");
  LAKEQ_REQUIRE(options->transcript_dir || options->remote || options->scripts_path,
                "lakeq_bench_run: choose transcripts, the remote backend or a scripts file");
  LAKEQ_REQUIRE(!(options->transcript_dir && options->record_dir),
                "lakeq_bench_run: replayed runs cannot be recorded");
  if (report_json) *report_json = nullptr;
  if (report_text) *report_text = nullptr;
  return guarded([&] {
    namespace bench = lakeq::bench;
    auto cases = bench::load_suite(options->suite_path);
    bench::BackendFactory factory;
    std::map<std::string, bench::CaseScript> scripts;
    if (options->transcript_dir) {
      std::filesystem::path dir = options->transcript_dir;
      factory = [dir](const bench::QueryCase& c) -> std::unique_ptr<lakeq::ChatClient> {
        return std::make_unique<lakeq::ReplayChatClient>(lakeq::load_transcript(dir / (c.id + ".jsonl")));
      };
    } else if (options->remote) {
      auto config = lakeq::RemoteConfig::from_env();
      factory = [config](const bench::QueryCase&) -> std::unique_ptr<lakeq::ChatClient> {
        return std::make_unique<lakeq::RemoteChatClient>(config);
      };
    } else {
      scripts = bench::load_scripts(options->scripts_path);
      if (options->flawed_path) {
        for (auto& [id, f] : bench::load_flawed(options->flawed_path)) scripts[id] = std::move(f.script);
      }
      factory = [&scripts](const bench::QueryCase& c) -> std::unique_ptr<lakeq::ChatClient> {
        auto it = scripts.find(c.id);
        if (it == scripts.end()) lakeq::fail(lakeq::ErrorKind::kInvalidArgument, "no script for case '" + c.id + "'");
        return lakeq::ScriptedChatClient::from_json(it->second.dump());
      };
    }
    if (options->record_dir) {
      std::filesystem::path dir = options->record_dir;
      std::filesystem::create_directories(dir);
      factory = [dir, inner = std::move(factory)](const bench::QueryCase& c) -> std::unique_ptr<lakeq::ChatClient> {
        return std::make_unique<SavingRecorder>(inner(c), dir / (c.id + ".jsonl"));
      };
    }
    bench::SuiteOptions so;
    so.workers = options->workers;
    so.max_retries = options->max_retries;
    auto report = bench::run_suite(cases, options->fixtures_root, factory, so);
    if (report_json) *report_json = owned_copy(report.to_json().dump(2) + "\n");
    if (report_text) *report_text = owned_copy(report.render_table());
    return LAKEQ_OK;
  });
}

}  // extern "C"
