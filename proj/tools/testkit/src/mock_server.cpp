#include "tabqa/testkit/mock_server.hpp"

#include <stdexcept>

#include "httplib.h"
#include "tabqa/gateway/chat.hpp"

namespace tabqa::testkit {

std::vector<MockRule> rules_from_json(const json& j) {
  std::vector<MockRule> rules;
  for (const auto& r : j.at("rules")) {
    MockRule rule;
    if (r.contains("contains")) {
      if (r["contains"].is_string()) {
        rule.contains.push_back(r["contains"].get<std::string>());
      } else {
        rule.contains = r["contains"].get<std::vector<std::string>>();
      }
    }
    rule.model = r.value("model", "");
    for (const auto& reply : r.at("replies")) {
      MockReply m;
      if (reply.is_string()) {
        m.text = reply.get<std::string>();
      } else {
        m.status = reply.value("status", 200);
        m.text = reply.value("text", "");
        m.finish_reason = reply.value("finish_reason", "stop");
        m.delay_ms = reply.value("delay_ms", 0);
      }
      rule.replies.push_back(std::move(m));
    }
    if (rule.replies.empty()) throw std::invalid_argument("mock rule without replies");
    rules.push_back(std::move(rule));
  }
  return rules;
}

MockChatServer::MockChatServer(std::vector<MockRule> rules)
    : server_(std::make_unique<httplib::Server>()), rules_(std::move(rules)), cursor_(rules_.size(), 0) {
  server_->Post(R"(.*/chat/completions)", [this](const httplib::Request& req, httplib::Response& res) {
    ReceivedRequest rec;
    rec.at = std::chrono::steady_clock::now();
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      res.status = 400;
      res.set_content(R"({"error":"bad json"})", "application/json");
      return;
    }
    rec.model = body.value("model", "");
    rec.text = gateway::flatten_text(body);
    for (const auto& m : body.value("messages", json::array())) {
      if (!m.contains("content") || !m["content"].is_array()) continue;
      for (const auto& p : m["content"]) rec.image_parts += p.value("type", "") == "image_url" ? 1 : 0;
    }

    MockReply reply{400, "", "stop", 0};
    bool matched = false;
    {
      std::lock_guard lock(mu_);
      for (std::size_t i = 0; i < rules_.size() && !matched; ++i) {
        const auto& rule = rules_[i];
        if (!rule.model.empty() && rule.model != rec.model) continue;
        bool all = true;
        for (const auto& needle : rule.contains) all = all && rec.text.find(needle) != std::string::npos;
        if (!all) continue;
        matched = true;
        reply = rule.replies[std::min(cursor_[i], rule.replies.size() - 1)];
        ++cursor_[i];
      }
      rec.status = reply.status;
      received_.push_back(rec);
    }
    if (reply.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(reply.delay_ms));
    res.status = reply.status;
    if (!matched) {
      res.set_content(R"({"error":"no scripted rule matched"})", "application/json");
    } else if (reply.status >= 200 && reply.status < 300) {
      json out = {{"id", "mock"},
                  {"object", "chat.completion"},
                  {"model", rec.model},
                  {"choices",
                   {{{"index", 0},
                     {"message", {{"role", "assistant"}, {"content", reply.text}}},
                     {"finish_reason", reply.finish_reason}}}},
                  {"usage", {{"prompt_tokens", 1}, {"completion_tokens", 1}, {"total_tokens", 2}}}};
      res.set_content(out.dump(), "application/json");
    } else {
      res.set_content(json{{"error", reply.text}}.dump(), "application/json");
    }
  });
}

MockChatServer::~MockChatServer() { stop(); }

void MockChatServer::start(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
  } else if (server_->bind_to_port("127.0.0.1", port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw std::runtime_error("mock server could not bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void MockChatServer::stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
  }
}

std::vector<ReceivedRequest> MockChatServer::received() const {
  std::lock_guard lock(mu_);
  return received_;
}

}  // namespace tabqa::testkit
