#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <mutex>

#include "tabqa/gateway/clock.hpp"

namespace tabqa::gateway {

/// Sliding-window limiter: at most `limit` acquisitions in any `window`.
class RateLimiter {
 public:
  RateLimiter(int limit, std::chrono::milliseconds window, std::shared_ptr<Clock> clock);

  /// Blocks (via the clock) until a slot is free, then takes it.
  void acquire();

 private:
  int limit_;
  std::chrono::milliseconds window_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<Clock::time_point> issued_;
};

}  // namespace tabqa::gateway
