#include "tabqa/gateway/gateway.hpp"

#include <cstdlib>

#include "tabqa/error.hpp"

namespace tabqa::gateway {

class ModelGateway::InFlightSlot {
 public:
  explicit InFlightSlot(ModelGateway& g) : g_(g) {
    std::unique_lock lock(g_.slots_mu_);
    g_.slots_cv_.wait(lock, [&] { return g_.in_flight_ < g_.config_.max_in_flight; });
    ++g_.in_flight_;
  }
  ~InFlightSlot() {
    {
      std::lock_guard lock(g_.slots_mu_);
      --g_.in_flight_;
    }
    g_.slots_cv_.notify_one();
  }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  ModelGateway& g_;
};

ModelGateway::ModelGateway(EndpointConfig config, Options options)
    : config_(std::move(config)), options_(std::move(options)) {
  config_.validate();
  if (!options_.transport) options_.transport = std::make_shared<HttpTransport>();
  if (!options_.audit) options_.audit = std::make_shared<NullAuditLog>();
  if (!options_.clock) options_.clock = std::make_shared<SteadyClock>();
  if (config_.rate_limit_rpm > 0) {
    limiter_.emplace(config_.rate_limit_rpm, std::chrono::minutes(1), options_.clock);
  }
}

namespace {

bool is_transient(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }

std::string chat_url(const std::string& base) {
  std::string url = base;
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url + "/chat/completions";
}

std::string truncate(std::string s, std::size_t n = 200) {
  if (s.size() > n) s.resize(n);
  return s;
}

}  // namespace

ChatResponse ModelGateway::complete(const ChatRequest& request) {
  request.validate();
  for (const auto& m : request.messages) {
    for (const auto& p : m.parts) {
      if (p.kind == ContentPart::Kind::kImage && p.image.bytes.size() > config_.max_image_bytes) {
        throw OversizedPayload("image of " + std::to_string(p.image.bytes.size()) +
                               " bytes exceeds limit of " + std::to_string(config_.max_image_bytes));
      }
    }
  }

  const std::string wire_model = config_.model.empty() ? request.model_id : config_.model;
  const std::string body = to_wire_json(request, wire_model).dump();
  const std::string url = chat_url(config_.base_url);

  AuditEntry entry;
  entry.role = options_.role;
  entry.model_id = request.model_id;
  entry.endpoint = url;
  entry.request_hash = sha256_hex(body);

  auto& clock = *options_.clock;
  const auto epoch = Clock::time_point{};
  auto stamp = [&] {
    return std::chrono::duration<double, std::milli>(clock.now() - epoch).count();
  };

  if (options_.dry_run) {
    entry.attempt = 1;
    entry.outcome = "dry_run";
    entry.at_ms = stamp();
    options_.audit->record(entry);
    ChatResponse r;
    r.finish_reason = FinishReason::kDryRun;
    r.attempts = 0;
    return r;
  }

  Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* token = std::getenv(config_.api_key_env.c_str()); token && *token) {
      headers.emplace_back("Authorization", std::string("Bearer ") + token);
    }
  }

  InFlightSlot slot(*this);
  std::string last_error;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    const Millis backoff = config_.retry.delay_before_attempt(attempt);
    if (backoff.count() > 0) clock.sleep_for(backoff);
    if (limiter_) limiter_->acquire();

    entry.attempt = attempt;
    entry.backoff_ms = backoff.count();
    entry.at_ms = stamp();
    entry.error.clear();
    const auto start = clock.now();
    HttpResult res = options_.transport->post_json(url, body, headers, config_.timeout);
    entry.latency_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(clock.now() - start).count();
    entry.http_status = res.status;

    if (res.status >= 200 && res.status < 300) {
      try {
        ChatResponse r = parse_wire_response(res.body);
        r.latency_ms = entry.latency_ms;
        r.attempts = attempt;
        entry.outcome = "ok";
        options_.audit->record(entry);
        return r;
      } catch (const EndpointError& e) {
        last_error = e.what();
      }
    } else if (!is_transient(res.status)) {
      entry.outcome = "rejected";
      entry.error = "HTTP " + std::to_string(res.status) + ": " + truncate(res.body);
      options_.audit->record(entry);
      throw PermanentRejection(entry.error);
    } else {
      last_error = res.status == 0 ? "transport: " + res.transport_error
                                   : "HTTP " + std::to_string(res.status);
    }
    entry.error = last_error;
    entry.outcome = attempt == config_.retry.max_attempts ? "exhausted" : "retry";
    options_.audit->record(entry);
  }
  throw Exhausted("gave up after " + std::to_string(config_.retry.max_attempts) +
                  " attempts: " + last_error);
}

}  // namespace tabqa::gateway
