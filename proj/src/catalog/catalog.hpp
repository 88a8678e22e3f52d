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

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/value.hpp"

namespace lakeq {

class ChatClient;

inline constexpr std::size_t kDefaultSampleCount = 5;
inline constexpr const char* kManifestName = "catalog.json";

enum class DatasetKind { kTable, kImageCollection, kTextCollection };

const char* to_string(DatasetKind kind);

struct ColumnDescriptor {
  std::string name;
  ColumnType semantic_type = ColumnType::kText;
  std::vector<std::string> samples;  // rendered, at most k
};

// One data-lake entry. Image and text collections are virtualized as
// two-column tables: (key TEXT, content IMAGE|DOCUMENT).
struct DatasetDescriptor {
  std::string name;
  DatasetKind kind = DatasetKind::kTable;
  std::vector<ColumnDescriptor> columns;
  std::filesystem::path source;   // CSV file or collection directory
  std::size_t row_count = 0;
  std::optional<std::filesystem::path> annotations;  // collections only

  const ColumnDescriptor* find_column(std::string_view column) const;
  std::vector<std::string> column_names() const;
};

// Immutable after load; safe to share across concurrent queries.
class Catalog {
 public:
  Catalog() = default;

  const std::filesystem::path& root() const { return root_; }
  const std::vector<DatasetDescriptor>& datasets() const { return datasets_; }
  const DatasetDescriptor* find(std::string_view name) const;
  bool empty() const { return datasets_.empty(); }

  // Full materialized relation of a dataset (all columns).
  std::shared_ptr<const Relation> relation(std::string_view name) const;

  // Text behind a document reference, loaded on first use.
  std::string document_text(const TextRef& ref) const;

  // Filesystem location of an image or document reference.
  std::filesystem::path resolve(std::string_view ref_path) const;

 private:
  friend Catalog load_catalog(const std::filesystem::path&, std::size_t);

  std::filesystem::path root_;
  std::vector<DatasetDescriptor> datasets_;
  std::map<std::string, std::shared_ptr<const Relation>, std::less<>> relations_;

  struct DocCache {
    std::mutex mu;
    std::map<std::string, std::string> texts;
  };
  std::shared_ptr<DocCache> docs_ = std::make_shared<DocCache>();
};

// Reads <root>/catalog.json, loads every table and collection, and fills
// up to sample_k example values per column.
Catalog load_catalog(const std::filesystem::path& root,
                     std::size_t sample_k = kDefaultSampleCount);

// Ranks datasets by lexical overlap with the query: dataset-name tokens
// weigh 3, column-name tokens 2, sample-value tokens 1; each query token
// counts once at its best weight. A query equal to a dataset name wins
// outright. Ties go to the lexicographically smaller name.
std::vector<DatasetDescriptor> discover(std::string_view query,
                                        const Catalog& catalog, std::size_t k);

// Per-dataset relevance score used by discover; exposed for tests.
double discovery_score(std::string_view query, const DatasetDescriptor& d);

// Asks the model which table columns matter for the query. Collections are
// rejected (Error kInvalidArgument). An unusable answer, after one reprompt,
// or an empty selection leaves the descriptor unpruned.
DatasetDescriptor prune_columns(std::string_view query,
                                const DatasetDescriptor& descriptor,
                                ChatClient& llm);

}  // namespace lakeq
