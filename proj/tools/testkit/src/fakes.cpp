#include "tabqa/testkit/fakes.hpp"

#include "tabqa/error.hpp"

namespace tabqa::testkit {

gateway::Clock::time_point FakeClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void FakeClock::sleep_for(std::chrono::milliseconds d) {
  std::lock_guard lock(mu_);
  now_ += d;
  sleeps_.push_back(d);
}

std::vector<std::chrono::milliseconds> FakeClock::sleeps() const {
  std::lock_guard lock(mu_);
  return sleeps_;
}

gateway::HttpResult ScriptedTransport::post_json(const std::string&, const std::string& body,
                                                 const gateway::Headers& headers, std::chrono::milliseconds) {
  std::lock_guard lock(mu_);
  bodies_.push_back(body);
  headers_.push_back(headers);
  const auto& r = script_.at(std::min(next_, script_.size() - 1));
  ++next_;
  return r;
}

int ScriptedTransport::calls() const {
  std::lock_guard lock(mu_);
  return static_cast<int>(bodies_.size());
}

std::vector<std::string> ScriptedTransport::bodies() const {
  std::lock_guard lock(mu_);
  return bodies_;
}

std::vector<gateway::Headers> ScriptedTransport::headers() const {
  std::lock_guard lock(mu_);
  return headers_;
}

gateway::HttpResult ScriptedTransport::ok(const std::string& text) {
  json body = {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}, {"finish_reason", "stop"}}}},
               {"usage", {{"prompt_tokens", 3}, {"completion_tokens", 2}, {"total_tokens", 5}}}};
  return {200, body.dump(), ""};
}

gateway::HttpResult ScriptedTransport::status(int code, std::string body) { return {code, std::move(body), ""}; }

gateway::HttpResult ScriptedTransport::transport_failure() { return {0, "", "connection refused"}; }

gateway::ChatResponse ScriptedClient::complete(const gateway::ChatRequest& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  const std::string& reply = replies_.at(std::min(next_, replies_.size() - 1));
  ++next_;
  if (reply == kFail) throw Exhausted("scripted failure");
  gateway::ChatResponse r;
  r.text = reply;
  r.attempts = 1;
  return r;
}

std::vector<gateway::ChatRequest> ScriptedClient::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

}  // namespace tabqa::testkit
