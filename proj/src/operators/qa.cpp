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

#include "httplib.h"

#include "common/error.hpp"
#include "common/text.hpp"
#include "operators/operators.hpp"

namespace fs = std::filesystem;

namespace lakeq {

std::string FixtureQaBackend::normalize_question(std::string_view question) {
  std::string out;
  bool space = false;
  for (char c : trim(question)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && (out.back() == '?' || out.back() == '.' || out.back() == ' ')) out.pop_back();
  return out;
}

FixtureQaBackend::FixtureQaBackend(const Catalog& catalog) {
  for (const auto& d : catalog.datasets()) {
    if (!d.annotations) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(*d.annotations));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kParse, "annotations of '" + d.name + "' are not valid JSON: " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::kParse, "annotations of '" + d.name + "' must be an object");
    auto dir = fs::relative(d.source, catalog.root()).generic_string();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_object()) {
        fail(ErrorKind::kParse, "annotations of '" + d.name + "': entry '" + it.key() + "' must be an object");
      }
      auto& slot = answers_[dir + "/" + it.key()];
      for (auto q = it.value().begin(); q != it.value().end(); ++q) {
        std::string a = q.value().is_string() ? q.value().get<std::string>() : q.value().dump();
        slot[normalize_question(q.key())] = a;
      }
    }
  }
}

std::string FixtureQaBackend::answer(const std::string& item_ref, const std::string& question) {
  auto it = answers_.find(item_ref);
  if (it == answers_.end()) return kUnknownAnswer;
  auto q = it->second.find(normalize_question(question));
  return q == it->second.end() ? kUnknownAnswer : q->second;
}

HttpQaBackend::HttpQaBackend(std::string url, fs::path catalog_root)
    : url_(std::move(url)), root_(std::move(catalog_root)) {}

std::string HttpQaBackend::answer(const std::string& item_ref, const std::string& question) {
  auto scheme_end = url_.find("://");
  auto path_start = url_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  std::string host = path_start == std::string::npos ? url_ : url_.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);
  httplib::Client cli(host);
  nlohmann::json body{{"item_uri", "file://" + fs::absolute(root_ / item_ref).generic_string()},
                      {"question", question}};
  auto res = cli.Post(path, body.dump(), "application/json");
  if (!res) fail(ErrorKind::kBackend, "QA service unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) fail(ErrorKind::kBackend, "QA service returned HTTP " + std::to_string(res->status));
  try {
    return nlohmann::json::parse(res->body).at("answer").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kBackend, std::string("malformed QA service response: ") + e.what());
  }
}

}  // namespace lakeq
