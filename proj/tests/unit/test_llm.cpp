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


#include <atomic>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "llm/llm.hpp"
#include "support.hpp"

using namespace lakeq;

namespace {

ChatRequest request(Phase tag, const std::string& user) {
  ChatRequest r;
  r.tag = tag;
  r.messages = {{Role::kSystem, "You plan queries."}, {Role::kUser, user}};
  r.template_hash = "abc123abc123";
  return r;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

// Local chat-completions endpoint that fails the first `failures` calls.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(int failures) : failures_(failures) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = req.body;
      last_auth = req.get_header_value("Authorization");
      if (calls++ < failures_) {
        res.status = 503;
        res.set_content("busy", "text/plain");
        return;
      }
      nlohmann::json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "Step 1: Do it."}}}}}}};
      res.set_content(j.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

  std::atomic<int> calls{0};
  std::string last_body;
  std::string last_auth;

 private:
  int failures_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("the request digest covers tag, sampling settings and messages only") {
  auto a = request(Phase::kPlanning, "hello");
  auto d = request_digest(a);
  CHECK(d.size() == 64);
  CHECK(request_digest(a) == d);
  auto b = a;
  b.template_hash = "different";
  CHECK(request_digest(b) == d);
  b = a;
  b.tag = Phase::kMapping;
  CHECK(request_digest(b) != d);
  b = a;
  b.temperature = 0.5;
  CHECK(request_digest(b) != d);
  b = a;
  b.max_tokens = 10;
  CHECK(request_digest(b) != d);
  b = a;
  b.messages[1].content += " ";
  CHECK(request_digest(b) != d);
}

TEST_CASE("invalid requests are refused") {
  ChatRequest empty;
  CHECK(kind_of([&] { validate(empty); }) == ErrorKind::kInvalidArgument);
  auto r = request(Phase::kPlanning, "x");
  r.temperature = -1;
  CHECK(kind_of([&] { validate(r); }) == ErrorKind::kInvalidArgument);
  r = request(Phase::kPlanning, "");
  CHECK(kind_of([&] { validate(r); }) == ErrorKind::kInvalidArgument);
  r = request(Phase::kPlanning, "x");
  r.max_tokens = 0;
  CHECK(kind_of([&] { validate(r); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("transcripts survive serialization and files") {
  auto inner = testing::scripted({{"planning", {"Step 1: A."}}, {"mapping", {"m1", "m2"}}});
  RecordingChatClient rec(*inner);
  CHECK(rec.complete(request(Phase::kPlanning, "q")) == "Step 1: A.");
  CHECK(rec.complete(request(Phase::kMapping, "s1")) == "m1");
  CHECK(rec.complete(request(Phase::kMapping, "s2")) == "m2");
  auto t = rec.transcript();
  REQUIRE(t.entries.size() == 3);
  CHECK(t.entries[1].request_digest == request_digest(request(Phase::kMapping, "s1")));
  CHECK(parse_transcript(serialize_transcript(t)) == t);
  testing::TempDir dir;
  save_transcript(t, dir.path() / "t.jsonl");
  CHECK(load_transcript(dir.path() / "t.jsonl") == t);
  CHECK(kind_of([] { parse_transcript("{\"tag\": \"planning\"}\nnot json\n"); }) == ErrorKind::kParse);
}

TEST_CASE("replay returns recorded answers and names the phase on a miss") {
  auto inner = testing::scripted({{"planning", {"plan"}}, {"mapping", {"map"}}});
  RecordingChatClient rec(*inner);
  rec.complete(request(Phase::kPlanning, "q"));
  rec.complete(request(Phase::kMapping, "s"));
  auto t = rec.transcript();

  ReplayChatClient replay(t);
  CHECK(replay.complete(request(Phase::kPlanning, "q")) == "plan");
  CHECK(replay.consumed() == 1);
  CHECK(replay.remaining() == 1);
  try {
    replay.complete(request(Phase::kMapping, "changed"));
    FAIL("expected a replay miss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kReplayMiss);
    CHECK(std::string(e.what()).find("'mapping'") != std::string::npos);
  }

  // A changed template is named in the miss.
  ReplayChatClient stale(t);
  auto edited = request(Phase::kPlanning, "q edited");
  edited.template_hash = "ffffffffffff";
  try {
    stale.complete(edited);
    FAIL("expected a replay miss");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("planning prompt template changed") != std::string::npos);
  }

  ReplayChatClient done(Transcript{});
  CHECK(kind_of([&] { done.complete(request(Phase::kUdf, "x")); }) == ErrorKind::kReplayMiss);
}

TEST_CASE("scripted responses are consumed per phase") {
  auto s = testing::scripted({{"planning", {"a", "b"}}, {"udf", {"u"}}});
  CHECK(s->complete(request(Phase::kUdf, "x")) == "u");
  CHECK(s->complete(request(Phase::kPlanning, "x")) == "a");
  CHECK(s->complete(request(Phase::kPlanning, "x")) == "b");
  CHECK(s->calls(Phase::kPlanning) == 2);
  CHECK(kind_of([&] { s->complete(request(Phase::kPlanning, "x")); }) == ErrorKind::kExhausted);
  CHECK(kind_of([&] { s->complete(request(Phase::kMapping, "x")); }) == ErrorKind::kExhausted);
  CHECK(kind_of([] { ScriptedChatClient::from_json("{\"nonsense\": []}"); }) == ErrorKind::kParse);
  CHECK(kind_of([] { ScriptedChatClient::from_json("{\"planning\": [1]}"); }) == ErrorKind::kParse);
}

TEST_CASE("the remote client speaks chat-completions and retries") {
  FakeEndpoint endpoint(1);
  RemoteConfig config;
  config.base_url = endpoint.base_url();
  config.api_key = "secret";
  config.model = "test-model";
  config.backoff_ms = 1;
  RemoteChatClient client(config);
  CHECK(client.complete(request(Phase::kPlanning, "q")) == "Step 1: Do it.");
  CHECK(endpoint.calls == 2);
  CHECK(endpoint.last_auth == "Bearer secret");
  auto body = nlohmann::json::parse(endpoint.last_body);
  CHECK(body["model"] == "test-model");
  CHECK(body["temperature"] == 0.0);
  CHECK(body["messages"][1]["content"] == "q");
  CHECK(body["messages"][0]["role"] == "system");
}

TEST_CASE("the remote client gives up after max_attempts") {
  FakeEndpoint endpoint(10);
  RemoteConfig config;
  config.base_url = endpoint.base_url();
  config.max_attempts = 2;
  config.backoff_ms = 1;
  RemoteChatClient client(config);
  CHECK(kind_of([&] { client.complete(request(Phase::kPlanning, "q")); }) == ErrorKind::kBackend);
  CHECK(endpoint.calls == 2);
  CHECK(kind_of([] { RemoteChatClient::parse_wire_response("{\"choices\": []}"); }) == ErrorKind::kBackend);
}
