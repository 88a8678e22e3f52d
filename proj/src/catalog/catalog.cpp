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

#include "catalog/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace lakeq {

const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kTable: return "table";
    case DatasetKind::kImageCollection: return "image_collection";
    case DatasetKind::kTextCollection: return "text_collection";
  }
  return "table";
}

const ColumnDescriptor* DatasetDescriptor::find_column(std::string_view column) const {
  for (const auto& c : columns) {
    if (c.name == column) return &c;
  }
  return nullptr;
}

std::vector<std::string> DatasetDescriptor::column_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns) out.push_back(c.name);
  return out;
}

const DatasetDescriptor* Catalog::find(std::string_view name) const {
  for (const auto& d : datasets_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::shared_ptr<const Relation> Catalog::relation(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) {
    fail(ErrorKind::kBinding, "unknown dataset '" + std::string(name) + "'");
  }
  return it->second;
}

fs::path Catalog::resolve(std::string_view ref_path) const {
  return root_ / fs::path(std::string(ref_path));
}

std::string Catalog::document_text(const TextRef& ref) const {
  std::lock_guard<std::mutex> lock(docs_->mu);
  auto it = docs_->texts.find(ref.path);
  if (it != docs_->texts.end()) return it->second;
  auto text = read_file(resolve(ref.path));
  docs_->texts.emplace(ref.path, text);
  return text;
}

namespace {

bool is_number_text(std::string_view s, double* out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s[0] == '+') s.remove_prefix(1);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return false;
  if (out) *out = v;
  return true;
}

bool is_image_file(const fs::path& p) {
  static const std::set<std::string> kExt = {".png", ".jpg", ".jpeg", ".ppm",
                                             ".gif", ".bmp", ".webp", ".tif",
                                             ".tiff"};
  return kExt.count(to_lower(p.extension().string())) > 0;
}

[[noreturn]] void bad_entry(const std::string& entry, const std::string& why) {
  fail(ErrorKind::kParse, "malformed manifest entry '" + entry + "': " + why);
}

std::vector<std::string> first_samples(const Relation& rel, std::size_t col, std::size_t k) {
  std::vector<std::string> out;
  for (const auto& row : rel.rows()) {
    if (out.size() >= k) break;
    if (is_null(row[col])) continue;
    auto s = render_cell(row[col]);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  }
  return out;
}

struct ManifestColumn {
  std::string name;
  std::optional<ColumnType> type;
};

std::vector<ManifestColumn> manifest_columns(const nlohmann::json& entry, const std::string& name) {
  std::vector<ManifestColumn> out;
  if (!entry.contains("columns")) return out;
  const auto& cols = entry["columns"];
  if (!cols.is_array()) bad_entry(name, "'columns' must be an array");
  for (const auto& c : cols) {
    ManifestColumn mc;
    if (c.is_string()) {
      mc.name = c.get<std::string>();
    } else if (c.is_object() && c.contains("name") && c["name"].is_string()) {
      mc.name = c["name"].get<std::string>();
      if (c.contains("type")) {
        if (!c["type"].is_string()) bad_entry(name, "column type must be a string");
        mc.type = parse_column_type(c["type"].get<std::string>());
        if (!mc.type) bad_entry(name, "unknown column type '" + c["type"].get<std::string>() + "'");
      }
    } else {
      bad_entry(name, "each column must be a name or {name, type}");
    }
    if (mc.name.empty()) bad_entry(name, "empty column name");
    out.push_back(std::move(mc));
  }
  return out;
}

Relation load_table(const fs::path& file, const std::string& name,
                    const std::vector<ManifestColumn>& overrides) {
  auto records = csv::parse(read_file(file));
  if (records.empty()) bad_entry(name, "table file has no header row");
  const auto& header = records.front();
  std::vector<Column> schema;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::optional<ColumnType> forced;
    for (const auto& o : overrides) {
      if (o.name == header[c]) forced = o.type;
    }
    ColumnType t = ColumnType::kText;
    if (forced) {
      t = *forced;
    } else {
      bool any = false, all_numeric = true;
      for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& v = records[r][c];
        if (trim(v).empty()) continue;
        any = true;
        if (!is_number_text(v, nullptr)) {
          all_numeric = false;
          break;
        }
      }
      if (any && all_numeric) t = ColumnType::kNumber;
    }
    schema.push_back({header[c], t});
  }
  for (const auto& o : overrides) {
    if (std::none_of(header.begin(), header.end(), [&](const std::string& h) { return h == o.name; })) {
      bad_entry(name, "column '" + o.name + "' is not in the table header");
    }
  }
  std::vector<Row> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    Row row;
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const auto& v = records[r][c];
      if (trim(v).empty()) {
        row.emplace_back(std::monostate{});
        continue;
      }
      switch (schema[c].type) {
        case ColumnType::kNumber: {
          double d = 0;
          if (!is_number_text(v, &d)) {
            bad_entry(name, "non-numeric value '" + v + "' in NUMBER column " + schema[c].name);
          }
          row.emplace_back(d);
          break;
        }
        case ColumnType::kBoolean: {
          auto lv = to_lower(trim(v));
          row.emplace_back(lv == "true" || lv == "1" || lv == "yes");
          break;
        }
        case ColumnType::kImage: row.emplace_back(ImageRef{v}); break;
        case ColumnType::kDocument: row.emplace_back(TextRef{v}); break;
        case ColumnType::kText: row.emplace_back(v); break;
      }
    }
    rows.push_back(std::move(row));
  }
  try {
    return Relation(std::move(schema), std::move(rows));
  } catch (const Error& e) {
    bad_entry(name, e.what());
  }
}

Relation load_collection(const fs::path& root, const fs::path& dir, const std::string& name,
                         DatasetKind kind, const std::vector<ManifestColumn>& overrides) {
  std::string key_col = kind == DatasetKind::kImageCollection ? "img_path" : "doc_id";
  std::string content_col = kind == DatasetKind::kImageCollection ? "image" : "document";
  if (!overrides.empty()) {
    if (overrides.size() != 2) bad_entry(name, "a collection has exactly two columns");
    key_col = overrides[0].name;
    content_col = overrides[1].name;
    if (overrides[0].type && *overrides[0].type != ColumnType::kText) {
      bad_entry(name, "the first collection column must be TEXT");
    }
    ColumnType want = kind == DatasetKind::kImageCollection ? ColumnType::kImage : ColumnType::kDocument;
    if (overrides[1].type && *overrides[1].type != want) {
      bad_entry(name, std::string("the second collection column must be ") + to_string(want));
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& p = entry.path();
    if (kind == DatasetKind::kImageCollection ? is_image_file(p)
                                              : to_lower(p.extension().string()) == ".txt") {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Column> schema = {
      {key_col, ColumnType::kText},
      {content_col, kind == DatasetKind::kImageCollection ? ColumnType::kImage : ColumnType::kDocument}};
  std::vector<Row> rows;
  for (const auto& f : files) {
    std::string rel = fs::relative(f, root).generic_string();
    if (kind == DatasetKind::kImageCollection) {
      rows.push_back({rel, ImageRef{rel}});
    } else {
      rows.push_back({f.stem().string(), TextRef{rel}});
    }
  }
  return Relation(std::move(schema), std::move(rows));
}

}  // namespace

Catalog load_catalog(const fs::path& root, std::size_t sample_k) {
  if (!fs::is_directory(root)) {
    fail(ErrorKind::kIo, "catalog root '" + root.string() + "' is not a directory");
  }
  auto manifest_path = root / kManifestName;
  if (!fs::exists(manifest_path)) {
    fail(ErrorKind::kIo, "missing manifest " + std::string(kManifestName) + " in " + root.string());
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, "manifest " + manifest_path.string() + " is not valid JSON: " + e.what());
  }
  if (!manifest.is_array()) {
    fail(ErrorKind::kParse, "manifest " + manifest_path.string() + " must be a JSON array");
  }

  Catalog cat;
  cat.root_ = root;
  std::size_t index = 0;
  for (const auto& entry : manifest) {
    std::string label = "#" + std::to_string(index++);
    if (!entry.is_object()) bad_entry(label, "not an object");
    if (!entry.contains("name") || !entry["name"].is_string() || entry["name"].get<std::string>().empty()) {
      bad_entry(label, "missing 'name'");
    }
    std::string name = entry["name"].get<std::string>();
    if (cat.find(name)) bad_entry(name, "duplicate dataset name");
    if (!entry.contains("kind") || !entry["kind"].is_string()) bad_entry(name, "missing 'kind'");
    if (!entry.contains("path") || !entry["path"].is_string()) bad_entry(name, "missing 'path'");
    std::string kind_text = entry["kind"].get<std::string>();
    DatasetKind kind;
    if (kind_text == "table") {
      kind = DatasetKind::kTable;
    } else if (kind_text == "image_collection") {
      kind = DatasetKind::kImageCollection;
    } else if (kind_text == "text_collection") {
      kind = DatasetKind::kTextCollection;
    } else {
      bad_entry(name, "unknown kind '" + kind_text + "'");
    }
    fs::path source = root / entry["path"].get<std::string>();
    auto overrides = manifest_columns(entry, name);

    DatasetDescriptor d;
    d.name = name;
    d.kind = kind;
    d.source = source;
    Relation rel;
    if (kind == DatasetKind::kTable) {
      if (!fs::is_regular_file(source)) {
        fail(ErrorKind::kIo, "dataset '" + name + "': data file not found: " + source.string());
      }
      rel = load_table(source, name, overrides);
    } else {
      if (!fs::is_directory(source)) {
        fail(ErrorKind::kIo, "dataset '" + name + "': collection directory not found: " + source.string());
      }
      rel = load_collection(root, source, name, kind, overrides);
      if (fs::is_regular_file(source / "annotations.json")) d.annotations = source / "annotations.json";
    }
    d.row_count = rel.size();
    for (std::size_t c = 0; c < rel.arity(); ++c) {
      d.columns.push_back({rel.column(c).name, rel.column(c).type, first_samples(rel, c, sample_k)});
    }
    cat.relations_.emplace(name, std::make_shared<const Relation>(std::move(rel)));
    cat.datasets_.push_back(std::move(d));
  }
  return cat;
}

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kWords = {
      "a", "an", "the", "of", "in", "on", "for", "to", "and", "or", "by", "with",
      "what", "which", "who", "how", "many", "much", "is", "are", "was", "were",
      "do", "doe", "did", "each", "every", "all", "per", "that", "this", "they",
      "their", "there", "it", "its", "be", "from", "at", "as", "show", "list",
      "give", "me", "plot", "number"};
  return kWords;
}

}  // namespace

double discovery_score(std::string_view query, const DatasetDescriptor& d) {
  std::map<std::string, int> weight;
  auto add = [&](std::string_view text, int w) {
    for (auto& t : word_tokens(text)) {
      auto& slot = weight[t];
      slot = std::max(slot, w);
    }
  };
  add(d.name, 3);
  for (const auto& c : d.columns) {
    add(c.name, 2);
    for (const auto& s : c.samples) add(s, 1);
  }
  double score = 0;
  std::set<std::string> seen;
  for (auto& t : word_tokens(query)) {
    if (stopwords().count(t) || !seen.insert(t).second) continue;
    auto it = weight.find(t);
    if (it != weight.end()) score += it->second;
  }
  auto normalized = to_lower(trim(query));
  std::replace(normalized.begin(), normalized.end(), ' ', '_');
  if (normalized == to_lower(d.name)) score += 1000;
  return score;
}

std::vector<DatasetDescriptor> discover(std::string_view query, const Catalog& catalog,
                                        std::size_t k) {
  if (k == 0) fail(ErrorKind::kInvalidArgument, "discover: k must be at least 1");
  std::vector<std::pair<double, const DatasetDescriptor*>> scored;
  for (const auto& d : catalog.datasets()) scored.emplace_back(discovery_score(query, d), &d);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->name < b.second->name;
  });
  std::vector<DatasetDescriptor> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(*scored[i].second);
  return out;
}

}  // namespace lakeq
