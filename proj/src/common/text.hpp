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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lakeq {

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);

// Lower-cased alphanumeric tokens; a trailing plural "s" is dropped so
// "teams" and "team" meet.
std::vector<std::string> word_tokens(std::string_view s);

struct FencedBlock {
  std::string info;  // language tag after the opening fence, may be empty
  std::string body;
};

// Every ``` fenced block in order of appearance. An unterminated final fence
// is not a block.
std::vector<FencedBlock> fenced_blocks(std::string_view text);

// SHA-256 of the bytes, lower-case hex.
std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lakeq
