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

#include <cmath>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "llm/llm.hpp"

namespace lakeq {

using ojson = nlohmann::ordered_json;

const char* to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::kDiscovery: return "discovery";
    case Phase::kPlanning: return "planning";
    case Phase::kMapping: return "mapping";
    case Phase::kRecovery: return "recovery";
    case Phase::kUdf: return "udf";
  }
  return "planning";
}

std::optional<Role> parse_role(std::string_view text) {
  for (Role r : {Role::kSystem, Role::kUser, Role::kAssistant}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

std::optional<Phase> parse_phase(std::string_view text) {
  for (Phase p : {Phase::kDiscovery, Phase::kPlanning, Phase::kMapping, Phase::kRecovery,
                  Phase::kUdf}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

void validate(const ChatRequest& request) {
  if (request.messages.empty()) {
    fail(ErrorKind::kInvalidArgument, "chat request has no messages");
  }
  if (!(request.temperature >= 0) || !std::isfinite(request.temperature)) {
    fail(ErrorKind::kInvalidArgument, "chat request temperature must be >= 0");
  }
  if (request.max_tokens <= 0) {
    fail(ErrorKind::kInvalidArgument, "chat request max_tokens must be positive");
  }
  for (const auto& m : request.messages) {
    if (m.role != Role::kAssistant && m.content.empty()) {
      fail(ErrorKind::kInvalidArgument,
           std::string("empty ") + to_string(m.role) + " message in chat request");
    }
  }
}

namespace {

ojson messages_json(const std::vector<ChatMessage>& messages) {
  ojson arr = ojson::array();
  for (const auto& m : messages) {
    arr.push_back(ojson{{"role", to_string(m.role)}, {"content", m.content}});
  }
  return arr;
}

std::vector<ChatMessage> messages_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) fail(ErrorKind::kParse, "request_messages must be an array");
  std::vector<ChatMessage> out;
  for (const auto& m : arr) {
    if (!m.is_object() || !m.contains("role") || !m.contains("content") ||
        !m["role"].is_string() || !m["content"].is_string()) {
      fail(ErrorKind::kParse, "message needs string fields role and content");
    }
    auto role = parse_role(m["role"].get<std::string>());
    if (!role) fail(ErrorKind::kParse, "unknown role '" + m["role"].get<std::string>() + "'");
    out.push_back({*role, m["content"].get<std::string>()});
  }
  return out;
}

}  // namespace

std::string request_digest(const ChatRequest& request) {
  ojson canon;
  canon["tag"] = to_string(request.tag);
  canon["temperature"] = request.temperature;
  canon["max_tokens"] = request.max_tokens;
  canon["messages"] = messages_json(request.messages);
  return sha256_hex(canon.dump());
}

std::string serialize_transcript(const Transcript& transcript) {
  std::string out;
  for (const auto& e : transcript.entries) {
    ojson line;
    line["tag"] = to_string(e.tag);
    line["request_digest"] = e.request_digest;
    line["request_messages"] = messages_json(e.request_messages);
    line["response"] = e.response;
    line["template_hash"] = e.template_hash;
    out += line.dump();
    out += '\n';
  }
  return out;
}

Transcript parse_transcript(std::string_view text) {
  Transcript t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    auto where = "transcript line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kParse, where + "malformed JSON (" + e.what() + ")");
    }
    try {
      if (!j.is_object()) fail(ErrorKind::kParse, "not an object");
      for (const char* key : {"tag", "request_digest", "response"}) {
        if (!j.contains(key) || !j[key].is_string()) {
          fail(ErrorKind::kParse, std::string("missing string field '") + key + "'");
        }
      }
      if (!j.contains("request_messages")) fail(ErrorKind::kParse, "missing field 'request_messages'");
      TranscriptEntry e;
      auto tag = parse_phase(j["tag"].get<std::string>());
      if (!tag) fail(ErrorKind::kParse, "unknown tag '" + j["tag"].get<std::string>() + "'");
      e.tag = *tag;
      e.request_digest = j["request_digest"].get<std::string>();
      e.request_messages = messages_from_json(j["request_messages"]);
      e.response = j["response"].get<std::string>();
      if (j.contains("template_hash") && j["template_hash"].is_string()) {
        e.template_hash = j["template_hash"].get<std::string>();
      }
      t.entries.push_back(std::move(e));
    } catch (const Error& e) {
      fail(ErrorKind::kParse, where + e.what());
    }
  }
  return t;
}

void save_transcript(const Transcript& transcript, const std::filesystem::path& path) {
  write_file(path, serialize_transcript(transcript));
}

Transcript load_transcript(const std::filesystem::path& path) {
  return parse_transcript(read_file(path));
}

ReplayChatClient::ReplayChatClient(Transcript transcript) : transcript_(std::move(transcript)) {}

std::size_t ReplayChatClient::consumed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cursor_;
}

std::size_t ReplayChatClient::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  return transcript_.entries.size() - cursor_;
}

std::string ReplayChatClient::complete(const ChatRequest& request) {
  validate(request);
  auto digest = request_digest(request);
  std::lock_guard<std::mutex> lock(mu_);
  const auto tag = std::string(to_string(request.tag));
  if (cursor_ >= transcript_.entries.size()) {
    fail(ErrorKind::kReplayMiss, "replay miss: transcript exhausted after " +
                                     std::to_string(transcript_.entries.size()) +
                                     " entries; unexpected '" + tag + "' request");
  }
  const auto& e = transcript_.entries[cursor_];
  if (e.tag != request.tag || e.request_digest != digest) {
    std::string msg = "replay miss at transcript entry " + std::to_string(cursor_ + 1) +
                      ": '" + tag + "' request (digest " + digest.substr(0, 12) +
                      ") does not match recorded '" + to_string(e.tag) + "' request (digest " +
                      e.request_digest.substr(0, 12) + ")";
    if (e.tag == request.tag && !e.template_hash.empty() && !request.template_hash.empty() &&
        e.template_hash != request.template_hash) {
      msg += "; the " + tag + " prompt template changed since recording (recorded " +
             e.template_hash + ", current " + request.template_hash + ")";
    }
    fail(ErrorKind::kReplayMiss, msg);
  }
  ++cursor_;
  return e.response;
}

ScriptedChatClient::ScriptedChatClient(Script script) : script_(std::move(script)) {}

std::unique_ptr<ScriptedChatClient> ScriptedChatClient::from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("scripted fixture is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::kParse, "scripted fixture must be a JSON object");
  Script script;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto phase = parse_phase(it.key());
    if (!phase) fail(ErrorKind::kParse, "scripted fixture: unknown phase '" + it.key() + "'");
    if (!it.value().is_array()) {
      fail(ErrorKind::kParse, "scripted fixture: '" + it.key() + "' must be an array of strings");
    }
    for (const auto& r : it.value()) {
      if (!r.is_string()) {
        fail(ErrorKind::kParse, "scripted fixture: '" + it.key() + "' must be an array of strings");
      }
      script[*phase].push_back(r.get<std::string>());
    }
  }
  return std::make_unique<ScriptedChatClient>(std::move(script));
}

std::unique_ptr<ScriptedChatClient> ScriptedChatClient::from_file(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

std::string ScriptedChatClient::complete(const ChatRequest& request) {
  validate(request);
  std::lock_guard<std::mutex> lock(mu_);
  auto& n = used_[request.tag];
  auto it = script_.find(request.tag);
  if (it == script_.end() || n >= it->second.size()) {
    fail(ErrorKind::kExhausted, "scripted fixture exhausted: no response #" +
                                    std::to_string(n + 1) + " for phase '" +
                                    to_string(request.tag) + "'");
  }
  return it->second[n++];
}

std::size_t ScriptedChatClient::calls(Phase phase) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = used_.find(phase);
  return it == used_.end() ? 0 : it->second;
}

std::string RecordingChatClient::complete(const ChatRequest& request) {
  auto response = inner_.complete(request);
  std::lock_guard<std::mutex> lock(mu_);
  transcript_.entries.push_back(
      {request.tag, request_digest(request), request.messages, response, request.template_hash});
  return response;
}

Transcript RecordingChatClient::transcript() const {
  std::lock_guard<std::mutex> lock(mu_);
  return transcript_;
}

}  // namespace lakeq
