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


/* C interface of the lakeq multi-modal query engine.
 *
 * Every object is an opaque handle created by a lakeq_*_open/new function
 * and released with the matching lakeq_*_free. Functions return a
 * lakeq_status; on failure lakeq_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with lakeq_string_free. Strings returned as const char* are
 * owned by the handle they came from. */

#ifndef LAKEQ_LAKEQ_H_
#define LAKEQ_LAKEQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LAKEQ_BUILDING_LIBRARY)
#    define LAKEQ_API __declspec(dllexport)
#  else
#    define LAKEQ_API __declspec(dllimport)
#  endif
#else
#  define LAKEQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lakeq_status {
  LAKEQ_OK = 0,
  LAKEQ_ERR_INVALID_ARGUMENT = 1,
  LAKEQ_ERR_IO = 2,
  LAKEQ_ERR_PARSE = 3,
  LAKEQ_ERR_BINDING = 4,
  LAKEQ_ERR_TYPE = 5,
  LAKEQ_ERR_SECURITY = 6,
  LAKEQ_ERR_BACKEND = 7,
  LAKEQ_ERR_REPLAY_MISS = 8,
  LAKEQ_ERR_EXHAUSTED = 9,
  LAKEQ_ERR_OPERATOR = 10,
  LAKEQ_ERR_QUERY_FAILED = 11,
  LAKEQ_ERR_INTERNAL = 12
} lakeq_status;

typedef struct lakeq_catalog lakeq_catalog;
typedef struct lakeq_llm lakeq_llm;
typedef struct lakeq_qa lakeq_qa;
typedef struct lakeq_outcome lakeq_outcome;

LAKEQ_API const char* lakeq_version(void);
LAKEQ_API const char* lakeq_status_name(lakeq_status status);
/* Message of the last failed call on this thread; "" if none. */
LAKEQ_API const char* lakeq_last_error(void);
LAKEQ_API void lakeq_string_free(char* s);

/* ---- catalog ---------------------------------------------------------- */

LAKEQ_API lakeq_status lakeq_catalog_open(const char* root, lakeq_catalog** out);
LAKEQ_API void lakeq_catalog_free(lakeq_catalog* catalog);
/* Datasets with columns, types and samples; JSON when as_json != 0. */
LAKEQ_API lakeq_status lakeq_catalog_describe(const lakeq_catalog* catalog, int as_json, char** out);

/* ---- language model backends ------------------------------------------ */

/* Scripted responses: {"planning": [...], "mapping": [...], ...}. */
LAKEQ_API lakeq_status lakeq_llm_scripted_file(const char* path, lakeq_llm** out);
LAKEQ_API lakeq_status lakeq_llm_scripted_json(const char* json, lakeq_llm** out);
/* Replays a JSONL transcript; a changed prompt is a replay miss. */
LAKEQ_API lakeq_status lakeq_llm_replay(const char* transcript_path, lakeq_llm** out);
/* OpenAI-compatible endpoint configured by LAKEQ_BASE_URL, LAKEQ_API_KEY
 * (or OPENAI_API_KEY) and LAKEQ_MODEL. */
LAKEQ_API lakeq_status lakeq_llm_remote(lakeq_llm** out);
/* Wraps inner and records every exchange. inner must outlive the recorder. */
LAKEQ_API lakeq_status lakeq_llm_recorder(lakeq_llm* inner, lakeq_llm** out);
LAKEQ_API lakeq_status lakeq_llm_save_transcript(const lakeq_llm* recorder, const char* path);
LAKEQ_API void lakeq_llm_free(lakeq_llm* llm);

/* ---- question answering backends -------------------------------------- */

/* Answers from the annotations.json files of the catalog's collections.
 * The catalog must outlive the backend. */
LAKEQ_API lakeq_status lakeq_qa_fixture(const lakeq_catalog* catalog, lakeq_qa** out);
/* POSTs {"item_uri", "question"} to url and reads {"answer"}. */
LAKEQ_API lakeq_status lakeq_qa_http(const char* url, const lakeq_catalog* catalog, lakeq_qa** out);
LAKEQ_API void lakeq_qa_free(lakeq_qa* qa);

/* ---- queries ---------------------------------------------------------- */

typedef struct lakeq_query_options {
  /* Comma-separated dataset names; NULL or "" runs discovery. */
  const char* datasets;
  int prune;            /* ask the model to prune table columns */
  size_t max_retries;   /* recovery attempts */
  size_t discovery_k;   /* datasets kept by discovery */
} lakeq_query_options;

LAKEQ_API void lakeq_query_options_init(lakeq_query_options* options);

/* Runs the query. *out receives an outcome whenever the arguments are
 * valid, also for failed queries, so that the trace can be inspected. The
 * return value is LAKEQ_OK for an answered query and the failure class
 * otherwise. */
LAKEQ_API lakeq_status lakeq_query(lakeq_catalog* catalog, lakeq_llm* llm, lakeq_qa* qa, const char* query,
                                   const lakeq_query_options* options, lakeq_outcome** out);

LAKEQ_API lakeq_status lakeq_outcome_status(const lakeq_outcome* outcome);
LAKEQ_API const char* lakeq_outcome_error(const lakeq_outcome* outcome);
/* "scalar", "table", "plot", or "" for a failed query. */
LAKEQ_API const char* lakeq_outcome_kind(const lakeq_outcome* outcome);
/* Canonical result JSON, "" for a failed query. */
LAKEQ_API const char* lakeq_outcome_result_json(const lakeq_outcome* outcome);
/* SHA-256 of the canonical result JSON, "" for a failed query. */
LAKEQ_API const char* lakeq_outcome_digest(const lakeq_outcome* outcome);
/* Human-readable result. */
LAKEQ_API const char* lakeq_outcome_result_text(const lakeq_outcome* outcome);
/* Physical operator names in execution order, comma separated. */
LAKEQ_API const char* lakeq_outcome_operators(const lakeq_outcome* outcome);
LAKEQ_API const char* lakeq_outcome_trace_json(const lakeq_outcome* outcome);
LAKEQ_API const char* lakeq_outcome_explain(const lakeq_outcome* outcome);
/* Plot specification and SVG; "" unless the result is a plot. */
LAKEQ_API const char* lakeq_outcome_plot_json(const lakeq_outcome* outcome);
LAKEQ_API const char* lakeq_outcome_plot_svg(const lakeq_outcome* outcome);
LAKEQ_API void lakeq_outcome_free(lakeq_outcome* outcome);

/* ---- benchmark -------------------------------------------------------- */

/* Writes artwork/, rotowire/, suite.json, gold.json and flawed.json. */
LAKEQ_API lakeq_status lakeq_fixtures_write(uint64_t seed, const char* out_dir);

typedef struct lakeq_bench_options {
  const char* fixtures_root;   /* directory holding <dataset>/catalog.json */
  const char* suite_path;
  /* Backend, first match wins: transcript_dir (<id>.jsonl per case), then
   * remote != 0, then scripts_path with optional flawed_path overrides. */
  const char* transcript_dir;
  int remote;
  const char* scripts_path;
  const char* flawed_path;
  /* When set, each case's conversation is saved as <record_dir>/<id>.jsonl.
   * Not allowed together with transcript_dir. */
  const char* record_dir;
  size_t workers;
  size_t max_retries;
} lakeq_bench_options;

LAKEQ_API void lakeq_bench_options_init(lakeq_bench_options* options);
/* Either output may be NULL. */
LAKEQ_API lakeq_status lakeq_bench_run(const lakeq_bench_options* options, char** report_json,
                                       char** report_text);

#ifdef __cplusplus
}
#endif

#endif /* LAKEQ_LAKEQ_H_ */
