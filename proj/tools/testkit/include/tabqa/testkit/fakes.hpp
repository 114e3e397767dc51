#pragma once

#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "tabqa/gateway/chat.hpp"
#include "tabqa/gateway/clock.hpp"
#include "tabqa/gateway/transport.hpp"

namespace tabqa::testkit {

/// Virtual time: sleep_for advances now() instantly.
class FakeClock final : public gateway::Clock {
 public:
  time_point now() override;
  void sleep_for(std::chrono::milliseconds d) override;
  std::vector<std::chrono::milliseconds> sleeps() const;

 private:
  mutable std::mutex mu_;
  time_point now_{};
  std::vector<std::chrono::milliseconds> sleeps_;
};

/// Transport returning queued results; the last one repeats.
class ScriptedTransport final : public gateway::Transport {
 public:
  explicit ScriptedTransport(std::vector<gateway::HttpResult> script) : script_(std::move(script)) {}

  gateway::HttpResult post_json(const std::string& url, const std::string& body,
                                const gateway::Headers& headers, std::chrono::milliseconds timeout) override;

  int calls() const;
  std::vector<std::string> bodies() const;
  std::vector<gateway::Headers> headers() const;

  /// Chat-completions body with `text` as the assistant message.
  static gateway::HttpResult ok(const std::string& text);
  static gateway::HttpResult status(int code, std::string body = "{}");
  static gateway::HttpResult transport_failure();

 private:
  mutable std::mutex mu_;
  std::vector<gateway::HttpResult> script_;
  std::size_t next_ = 0;
  std::vector<std::string> bodies_;
  std::vector<gateway::Headers> headers_;
};

/// In-process chat client answering from a queue (last reply repeats).
/// Entries equal to kFail throw Exhausted.
class ScriptedClient final : public gateway::ChatClient {
 public:
  static constexpr const char* kFail = "\x01" "fail";

  explicit ScriptedClient(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  gateway::ChatResponse complete(const gateway::ChatRequest& request) override;

  std::vector<gateway::ChatRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  std::vector<gateway::ChatRequest> requests_;
};

}  // namespace tabqa::testkit
