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

namespace lakeq {

enum class Role { kSystem, kUser, kAssistant };
enum class Phase { kDiscovery, kPlanning, kMapping, kRecovery, kUdf };

const char* to_string(Role role);
const char* to_string(Phase phase);
std::optional<Role> parse_role(std::string_view text);
std::optional<Phase> parse_phase(std::string_view text);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  Phase tag = Phase::kPlanning;
  double temperature = 0.0;
  int max_tokens = 1024;
  // Hash of the prompt templates that produced the messages. Not part of
  // the digest; only used to explain replay misses.
  std::string template_hash;
};

// Throws Error(kInvalidArgument) when the request breaks its invariants.
void validate(const ChatRequest& request);

// SHA-256 over the canonical JSON of (tag, temperature, max_tokens, messages).
std::string request_digest(const ChatRequest& request);

struct TranscriptEntry {
  Phase tag = Phase::kPlanning;
  std::string request_digest;
  std::vector<ChatMessage> request_messages;
  std::string response;
  std::string template_hash;
  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// One JSON object per line.
std::string serialize_transcript(const Transcript& transcript);
Transcript parse_transcript(std::string_view text);  // kParse names the line
void save_transcript(const Transcript& transcript, const std::filesystem::path& path);
Transcript load_transcript(const std::filesystem::path& path);

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Consumes transcript entries in order; a digest mismatch is a replay miss.
class ReplayChatClient : public ChatClient {
 public:
  explicit ReplayChatClient(Transcript transcript);
  std::string complete(const ChatRequest& request) override;
  std::size_t consumed() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  Transcript transcript_;
  std::size_t cursor_ = 0;
};

// Canned responses per phase, consumed by ordinal.
class ScriptedChatClient : public ChatClient {
 public:
  using Script = std::map<Phase, std::vector<std::string>>;

  explicit ScriptedChatClient(Script script);
  // {"planning": ["..."], "mapping": ["...", ...], ...}
  static std::unique_ptr<ScriptedChatClient> from_json(std::string_view json_text);
  static std::unique_ptr<ScriptedChatClient> from_file(const std::filesystem::path& path);

  std::string complete(const ChatRequest& request) override;
  std::size_t calls(Phase phase) const;

 private:
  mutable std::mutex mu_;
  Script script_;
  std::map<Phase, std::size_t> used_;
};

// Forwards to another client and appends every exchange to a transcript.
class RecordingChatClient : public ChatClient {
 public:
  explicit RecordingChatClient(ChatClient& inner) : inner_(inner) {}
  std::string complete(const ChatRequest& request) override;
  Transcript transcript() const;

 private:
  ChatClient& inner_;
  mutable std::mutex mu_;
  Transcript transcript_;
};

struct RemoteConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4";
  int timeout_seconds = 120;
  int max_attempts = 3;
  int backoff_ms = 500;  // doubled after each failed attempt

  // LAKEQ_BASE_URL, LAKEQ_API_KEY (falls back to OPENAI_API_KEY), LAKEQ_MODEL.
  static RemoteConfig from_env();
};

// OpenAI-compatible /chat/completions client. Safe for concurrent calls.
class RemoteChatClient : public ChatClient {
 public:
  explicit RemoteChatClient(RemoteConfig config);
  std::string complete(const ChatRequest& request) override;

  // Request body as sent on the wire; exposed for tests.
  std::string wire_body(const ChatRequest& request) const;
  // Pulls choices[0].message.content out of a response body.
  static std::string parse_wire_response(std::string_view body);

 private:
  RemoteConfig config_;
};

}  // namespace lakeq
