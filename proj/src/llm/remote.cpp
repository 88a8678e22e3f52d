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

// HTTPS support comes from CPPHTTPLIB_OPENSSL_SUPPORT, set for the whole
// library so every translation unit sees the same httplib.
#include "httplib.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "common/error.hpp"
#include "common/log.hpp"
#include "json.hpp"
#include "llm/llm.hpp"

namespace lakeq {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// "https://host:port/v1" -> {"https://host:port", "/v1"}
std::pair<std::string, std::string> split_base_url(const std::string& url) {
  auto scheme_end = url.find("://");
  auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  auto path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
  RemoteConfig c;
  c.base_url = env_or("LAKEQ_BASE_URL", c.base_url);
  c.api_key = env_or("LAKEQ_API_KEY", env_or("OPENAI_API_KEY", ""));
  c.model = env_or("LAKEQ_MODEL", c.model);
  return c;
}

RemoteChatClient::RemoteChatClient(RemoteConfig config) : config_(std::move(config)) {
  if (config_.max_attempts < 1) config_.max_attempts = 1;
}

std::string RemoteChatClient::wire_body(const ChatRequest& request) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  auto& msgs = body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return body.dump();
}

std::string RemoteChatClient::parse_wire_response(std::string_view body) {
  try {
    auto j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) fail(ErrorKind::kBackend, "response content is not a string");
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kBackend, std::string("malformed chat-completions response: ") + e.what());
  }
}

std::string RemoteChatClient::complete(const ChatRequest& request) {
  validate(request);
  auto [host, prefix] = split_base_url(config_.base_url);
  auto body = wire_body(request);
  std::string last_error;
  int backoff = config_.backoff_ms;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Client cli(host);
    cli.set_connection_timeout(config_.timeout_seconds, 0);
    cli.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = cli.Post(prefix + "/chat/completions", headers, body, "application/json");
    if (res && res->status == 200) return parse_wire_response(res->body);
    if (res) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300);
    } else {
      last_error = httplib::to_string(res.error());
    }
    logger().warn("{} request attempt {}/{} failed: {}", to_string(request.tag), attempt,
                  config_.max_attempts, last_error);
    if (attempt < config_.max_attempts && backoff > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
  }
  fail(ErrorKind::kBackend, "chat completion failed after " +
                                std::to_string(config_.max_attempts) + " attempts: " + last_error);
}

}  // namespace lakeq
