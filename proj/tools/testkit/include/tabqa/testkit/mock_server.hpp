#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "tabqa/util.hpp"

namespace httplib {
class Server;
}

namespace tabqa::testkit {

struct MockReply {
  int status = 200;
  std::string text;                 // assistant content for 2xx replies
  std::string finish_reason = "stop";
  int delay_ms = 0;
};

/// Answers requests whose flattened text contains every `contains` entry
/// (and whose wire model equals `model`, when set). Replies are consumed in
/// order; the last one repeats.
struct MockRule {
  std::vector<std::string> contains;
  std::string model;
  std::vector<MockReply> replies;
};

/// Script JSON: {"rules": [{"contains": [..], "model": "..", "replies":
/// [{"status": 200, "text": ".."}]}]}
std::vector<MockRule> rules_from_json(const json& j);

struct ReceivedRequest {
  std::chrono::steady_clock::time_point at;
  std::string model;
  std::string text;  // flattened text parts
  std::size_t image_parts = 0;
  int status = 0;
};

/// Localhost chat-completions server with scripted replies. Unmatched
/// requests get HTTP 400.
class MockChatServer {
 public:
  explicit MockChatServer(std::vector<MockRule> rules);
  ~MockChatServer();
  MockChatServer(const MockChatServer&) = delete;
  MockChatServer& operator=(const MockChatServer&) = delete;

  /// Binds 127.0.0.1 on `port` (0 picks a free one) and serves in a thread.
  void start(int port = 0);
  void stop();
  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

  std::vector<ReceivedRequest> received() const;

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::vector<MockRule> rules_;
  std::vector<std::size_t> cursor_;
  std::vector<ReceivedRequest> received_;
};

}  // namespace tabqa::testkit
