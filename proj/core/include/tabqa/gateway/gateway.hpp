#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "tabqa/gateway/audit_log.hpp"
#include "tabqa/gateway/chat.hpp"
#include "tabqa/gateway/clock.hpp"
#include "tabqa/gateway/endpoint_config.hpp"
#include "tabqa/gateway/rate_limiter.hpp"
#include "tabqa/gateway/transport.hpp"

namespace tabqa::gateway {

/// Chat client for one configured endpoint. Retries transient failures
/// (transport errors, 408, 429, 5xx) with exponential backoff, enforces the
/// rate limit and in-flight cap, and audit-logs every attempt. Safe to share
/// across threads.
class ModelGateway final : public ChatClient {
 public:
  struct Options {
    std::string role = "answerer";
    std::shared_ptr<Transport> transport;   // default: HttpTransport
    std::shared_ptr<AuditLog> audit;        // default: NullAuditLog
    std::shared_ptr<Clock> clock;           // default: SteadyClock
    bool dry_run = false;                   // audit the request, never send it
  };

  ModelGateway(EndpointConfig config, Options options);

  /// Throws Exhausted, PermanentRejection or OversizedPayload.
  ChatResponse complete(const ChatRequest& request) override;

  const EndpointConfig& config() const { return config_; }

 private:
  class InFlightSlot;

  EndpointConfig config_;
  Options options_;
  std::optional<RateLimiter> limiter_;
  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;
};

}  // namespace tabqa::gateway
