#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "tabqa/util.hpp"

namespace tabqa::gateway {

using Millis = std::chrono::milliseconds;

struct RetryPolicy {
  int max_attempts = 3;
  Millis initial_backoff{500};
  double multiplier = 2.0;
  Millis max_backoff{8000};

  /// Wait before `attempt` (1-based). Zero before the first attempt and
  /// non-decreasing afterwards.
  Millis delay_before_attempt(int attempt) const;
};

struct EndpointConfig {
  std::string base_url;         // e.g. http://localhost:8000/v1
  std::string model;            // model name on the wire; empty -> request model_id
  std::string api_key_env;      // name of the env var holding the token
  Millis timeout{60000};
  RetryPolicy retry;
  int rate_limit_rpm = 0;       // 0 = unlimited
  std::size_t max_image_bytes = 20u << 20;
  int max_in_flight = 4;

  /// Throws ConfigError.
  void validate() const;
};

json to_json(const EndpointConfig& config);
/// Missing keys keep their defaults. Throws ConfigError.
EndpointConfig endpoint_config_from_json(const json& j);

}  // namespace tabqa::gateway
