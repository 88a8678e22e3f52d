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

#include "common/csv.hpp"

#include "common/error.hpp"

namespace lakeq::csv {

std::vector<Record> parse(std::string_view text) {
  std::vector<Record> out;
  Record rec;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    rec.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(rec.size() == 1 && rec[0].empty())) {
      if (!out.empty() && rec.size() != out.front().size()) {
        fail(ErrorKind::kParse, "csv line " + std::to_string(line) + ": expected " +
                                    std::to_string(out.front().size()) +
                                    " fields, got " + std::to_string(rec.size()));
      }
      out.push_back(std::move(rec));
    }
    rec.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) fail(ErrorKind::kParse, "csv: unterminated quoted field");
  if (!field.empty() || !rec.empty()) end_record();
  return out;
}

std::string write(const std::vector<Record>& records) {
  std::string out;
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (i) out.push_back(',');
      const auto& f = rec[i];
      bool quote = f.find_first_of(",\"\n\r") != std::string::npos;
      if (!quote) {
        out += f;
        continue;
      }
      out.push_back('"');
      for (char c : f) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace lakeq::csv
