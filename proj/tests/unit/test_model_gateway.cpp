#include <cstdlib>

#include "doctest.h"
#include "support/workspace.hpp"
#include "tabqa/error.hpp"
#include "tabqa/gateway/gateway.hpp"
#include "tabqa/testkit/fakes.hpp"
#include "tabqa/testkit/mock_server.hpp"

using namespace tabqa;
using namespace tabqa::gateway;
using testkit::ScriptedTransport;
using std::chrono::milliseconds;

namespace {

ChatRequest text_request(const std::string& text = "hello") {
  ChatRequest r;
  r.model_id = "m";
  r.messages.push_back({Role::kUser, {ContentPart::of_text(text)}});
  return r;
}

EndpointConfig config() {
  EndpointConfig c;
  c.base_url = "http://example.invalid/v1";
  c.retry.max_attempts = 3;
  c.retry.initial_backoff = milliseconds(500);
  c.retry.multiplier = 2.0;
  c.retry.max_backoff = milliseconds(800);
  return c;
}

struct Rig {
  std::shared_ptr<ScriptedTransport> transport;
  std::shared_ptr<MemoryAuditLog> audit = std::make_shared<MemoryAuditLog>();
  std::shared_ptr<testkit::FakeClock> clock = std::make_shared<testkit::FakeClock>();
  std::unique_ptr<ModelGateway> gateway;

  Rig(std::vector<HttpResult> script, EndpointConfig cfg = config(), bool dry_run = false)
      : transport(std::make_shared<ScriptedTransport>(std::move(script))) {
    ModelGateway::Options o;
    o.role = "answerer";
    o.transport = transport;
    o.audit = audit;
    o.clock = clock;
    o.dry_run = dry_run;
    gateway = std::make_unique<ModelGateway>(cfg, o);
  }
};

}  // namespace

TEST_CASE("backoff schedule") {
  RetryPolicy p;
  p.initial_backoff = milliseconds(100);
  p.multiplier = 3;
  p.max_backoff = milliseconds(1000);
  CHECK(p.delay_before_attempt(1) == milliseconds(0));
  CHECK(p.delay_before_attempt(2) == milliseconds(100));
  CHECK(p.delay_before_attempt(3) == milliseconds(300));
  CHECK(p.delay_before_attempt(4) == milliseconds(900));
  CHECK(p.delay_before_attempt(5) == milliseconds(1000));
  CHECK(p.delay_before_attempt(50) == milliseconds(1000));
}

TEST_CASE("endpoint config validation and json") {
  auto c = config();
  CHECK_NOTHROW(c.validate());
  auto back = endpoint_config_from_json(to_json(c));
  CHECK(back.retry.max_attempts == 3);
  CHECK(back.retry.max_backoff == milliseconds(800));
  c.base_url = "ftp://x";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config();
  c.retry.max_attempts = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(endpoint_config_from_json(json{{"base_url", "http://x"}, {"surprise", 1}}), ConfigError);
}

TEST_CASE("wire format") {
  ChatRequest r = text_request("question");
  r.messages.insert(r.messages.begin(), {Role::kSystem, {ContentPart::of_text("sys")}});
  r.messages.back().parts.insert(r.messages.back().parts.begin(), ContentPart::of_image({"\x89PNG", "image/png"}));
  auto j = to_wire_json(r, "wire-model");
  CHECK(j["model"] == "wire-model");
  CHECK(j["messages"][0]["role"] == "system");
  CHECK(j["messages"][1]["content"][0]["type"] == "image_url");
  CHECK(j["messages"][1]["content"][0]["image_url"]["url"].get<std::string>().rfind("data:image/png;base64,", 0) == 0);
  CHECK(j["max_tokens"] == 512);
  CHECK(flatten_text(j) == "sys\nquestion\n");

  auto resp = parse_wire_response(
      R"({"choices":[{"message":{"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}]},"finish_reason":"length"}],"usage":{"prompt_tokens":3,"completion_tokens":2,"total_tokens":5}})");
  CHECK(resp.text == "ab");
  CHECK(resp.finish_reason == FinishReason::kLength);
  CHECK(resp.usage.total_tokens == 5);
  CHECK_THROWS_AS(parse_wire_response("{}"), EndpointError);
  CHECK_THROWS_AS(parse_wire_response("not json"), EndpointError);

  ChatRequest two_images = text_request();
  two_images.messages[0].parts.push_back(ContentPart::of_image({}));
  two_images.messages[0].parts.push_back(ContentPart::of_image({}));
  CHECK_THROWS_AS(two_images.validate(), ConfigError);
  ChatRequest empty;
  empty.model_id = "m";
  CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("transient failures are retried with backoff") {
  Rig rig({ScriptedTransport::status(503), ScriptedTransport::transport_failure(), ScriptedTransport::ok("fine")});
  auto resp = rig.gateway->complete(text_request());
  CHECK(resp.text == "fine");
  CHECK(resp.attempts == 3);
  CHECK(rig.transport->calls() == 3);
  CHECK(rig.clock->sleeps() == std::vector<milliseconds>{milliseconds(500), milliseconds(800)});
  auto entries = rig.audit->entries();
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].outcome == "retry");
  CHECK(entries[0].http_status == 503);
  CHECK(entries[1].http_status == 0);
  CHECK(entries[2].outcome == "ok");
  CHECK(entries[2].backoff_ms == 800);
  CHECK(entries[0].request_hash == entries[2].request_hash);
  CHECK(entries[0].request_hash.size() == 64);
}

TEST_CASE("429 and malformed bodies are transient; exhaustion throws") {
  Rig rig({ScriptedTransport::status(429), HttpResult{200, "garbage", ""}, ScriptedTransport::status(500)});
  CHECK_THROWS_AS(rig.gateway->complete(text_request()), Exhausted);
  CHECK(rig.transport->calls() == 3);
  CHECK(rig.audit->entries().back().outcome == "exhausted");
}

TEST_CASE("4xx other than 408 and 429 is permanent") {
  Rig rig({ScriptedTransport::status(401), ScriptedTransport::ok("never")});
  CHECK_THROWS_AS(rig.gateway->complete(text_request()), PermanentRejection);
  CHECK(rig.transport->calls() == 1);
  CHECK(rig.audit->entries().back().outcome == "rejected");

  Rig timeout({ScriptedTransport::status(408), ScriptedTransport::ok("ok")});
  CHECK(timeout.gateway->complete(text_request()).text == "ok");
}

TEST_CASE("tokens come from the named env var and never reach the audit log") {
  ::setenv("TABQA_TEST_TOKEN", "sk-secret-value", 1);
  auto cfg = config();
  cfg.api_key_env = "TABQA_TEST_TOKEN";
  Rig rig({ScriptedTransport::ok("x")}, cfg);
  rig.gateway->complete(text_request("classified question"));
  bool saw = false;
  const auto sent = rig.transport->headers();
  for (const auto& [k, v] : sent.at(0)) saw = saw || (k == "Authorization" && v == "Bearer sk-secret-value");
  CHECK(saw);
  for (const auto& e : rig.audit->entries()) {
    const auto line = to_json(e).dump();
    CHECK(line.find("sk-secret") == std::string::npos);
    CHECK(line.find("classified") == std::string::npos);
  }
  ::unsetenv("TABQA_TEST_TOKEN");
  Rig anon({ScriptedTransport::ok("x")}, cfg);
  anon.gateway->complete(text_request());
  const auto anon_sent = anon.transport->headers();
  for (const auto& [k, v] : anon_sent.at(0)) CHECK(k != "Authorization");
}

TEST_CASE("file audit log writes one json line per attempt") {
  testsupport::TempDir dir;
  const auto path = dir.path() / "audit.jsonl";
  ModelGateway::Options o;
  auto transport = std::make_shared<ScriptedTransport>(std::vector<HttpResult>{ScriptedTransport::status(502),
                                                                               ScriptedTransport::ok("y")});
  o.transport = transport;
  o.audit = std::make_shared<FileAuditLog>(path);
  o.clock = std::make_shared<testkit::FakeClock>();
  ModelGateway gw(config(), o);
  gw.complete(text_request());
  auto lines = read_json_lines(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0]["outcome"] == "retry");
  CHECK(lines[1]["attempt"] == 2);
}

TEST_CASE("dry run audits without sending") {
  Rig rig({ScriptedTransport::ok("x")}, config(), true);
  auto resp = rig.gateway->complete(text_request());
  CHECK(resp.finish_reason == FinishReason::kDryRun);
  CHECK(rig.transport->calls() == 0);
  REQUIRE(rig.audit->entries().size() == 1);
  CHECK(rig.audit->entries()[0].outcome == "dry_run");
}

TEST_CASE("oversized images are refused before sending") {
  auto cfg = config();
  cfg.max_image_bytes = 4;
  Rig rig({ScriptedTransport::ok("x")}, cfg);
  auto r = text_request();
  r.messages[0].parts.push_back(ContentPart::of_image({"12345", "image/png"}));
  CHECK_THROWS_AS(rig.gateway->complete(r), OversizedPayload);
  CHECK(rig.transport->calls() == 0);
}

TEST_CASE("rate limiter spaces requests over the window") {
  auto clock = std::make_shared<testkit::FakeClock>();
  RateLimiter limiter(2, milliseconds(60000), clock);
  const auto t0 = clock->now();
  limiter.acquire();
  limiter.acquire();
  CHECK(clock->now() == t0);
  limiter.acquire();
  CHECK(clock->now() - t0 >= milliseconds(60000));

  auto cfg = config();
  cfg.rate_limit_rpm = 1;
  Rig rig({ScriptedTransport::ok("x")}, cfg);
  rig.gateway->complete(text_request());
  rig.gateway->complete(text_request());
  auto entries = rig.audit->entries();
  REQUIRE(entries.size() == 2);
  CHECK(entries[1].at_ms - entries[0].at_ms >= 60000.0);
}

TEST_CASE("http transport against the local mock server") {
  testkit::MockChatServer server(testkit::rules_from_json(json::parse(R"({"rules":[
    {"contains":["ping"],"replies":[{"status":500,"text":"boom"},{"status":200,"text":"pong"}]},
    {"contains":["bad"],"replies":[{"status":400,"text":"no"}]}]})")));
  server.start();
  auto cfg = config();
  cfg.base_url = server.base_url();
  cfg.retry.initial_backoff = milliseconds(1);
  cfg.retry.max_backoff = milliseconds(2);
  ModelGateway::Options o;
  ModelGateway gw(cfg, o);
  auto r = text_request("ping");
  r.messages[0].parts.push_back(ContentPart::of_image({"\x89PNG\r\n", "image/png"}));
  auto resp = gw.complete(r);
  CHECK(resp.text == "pong");
  CHECK(resp.attempts == 2);
  CHECK_THROWS_AS(gw.complete(text_request("bad")), PermanentRejection);
  auto received = server.received();
  REQUIRE(received.size() == 3);
  CHECK(received[0].image_parts == 1);
  CHECK(received[0].model == "m");
  server.stop();

  HttpTransport t;
  auto dead = t.post_json(server.base_url() + "/chat/completions", "{}", {}, milliseconds(200));
  CHECK(dead.status == 0);
  CHECK_FALSE(dead.transport_error.empty());
}
