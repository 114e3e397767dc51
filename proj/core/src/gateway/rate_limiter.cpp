#include "tabqa/gateway/rate_limiter.hpp"

namespace tabqa::gateway {

RateLimiter::RateLimiter(int limit, std::chrono::milliseconds window, std::shared_ptr<Clock> clock)
    : limit_(limit), window_(window), clock_(std::move(clock)) {}

void RateLimiter::acquire() {
  while (true) {
    std::chrono::milliseconds wait{0};
    {
      std::lock_guard lock(mu_);
      auto now = clock_->now();
      while (!issued_.empty() && now - issued_.front() >= window_) issued_.pop_front();
      if (static_cast<int>(issued_.size()) < limit_) {
        issued_.push_back(now);
        return;
      }
      wait = std::chrono::ceil<std::chrono::milliseconds>(issued_.front() + window_ - now);
    }
    clock_->sleep_for(std::max(wait, std::chrono::milliseconds{1}));
  }
}

}  // namespace tabqa::gateway
