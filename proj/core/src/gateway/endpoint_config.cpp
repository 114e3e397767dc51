#include "tabqa/gateway/endpoint_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tabqa/error.hpp"

namespace tabqa::gateway {

Millis RetryPolicy::delay_before_attempt(int attempt) const {
  if (attempt <= 1) return Millis{0};
  double ms = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, attempt - 2);
  ms = std::min(ms, static_cast<double>(max_backoff.count()));
  return Millis{static_cast<Millis::rep>(ms)};
}

void EndpointConfig::validate() const {
  if (base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (!base_url.starts_with("http://") && !base_url.starts_with("https://")) {
    throw ConfigError("endpoint base_url must be http(s): " + base_url);
  }
  if (retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
  if (timeout.count() <= 0) throw ConfigError("timeout must be > 0");
  if (retry.multiplier < 1.0) throw ConfigError("retry.multiplier must be >= 1");
  if (retry.initial_backoff.count() < 0 || retry.max_backoff < retry.initial_backoff) {
    throw ConfigError("retry backoff bounds are inconsistent");
  }
  if (rate_limit_rpm < 0) throw ConfigError("rate_limit_rpm must be >= 0");
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
}

json to_json(const EndpointConfig& c) {
  return {{"base_url", c.base_url},
          {"model", c.model},
          {"api_key_env", c.api_key_env},
          {"timeout_ms", c.timeout.count()},
          {"retry",
           {{"max_attempts", c.retry.max_attempts},
            {"initial_backoff_ms", c.retry.initial_backoff.count()},
            {"multiplier", c.retry.multiplier},
            {"max_backoff_ms", c.retry.max_backoff.count()}}},
          {"rate_limit_rpm", c.rate_limit_rpm},
          {"max_image_bytes", c.max_image_bytes},
          {"max_in_flight", c.max_in_flight}};
}

EndpointConfig endpoint_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("endpoint config must be an object");
  static const std::set<std::string> kKeys = {"base_url", "model", "api_key_env", "timeout_ms", "retry",
                                              "rate_limit_rpm", "max_image_bytes", "max_in_flight"};
  static const std::set<std::string> kRetryKeys = {"max_attempts", "initial_backoff_ms", "multiplier",
                                                   "max_backoff_ms"};
  for (const auto& [k, v] : j.items()) {
    if (!kKeys.count(k)) throw ConfigError("unknown endpoint key '" + k + "'");
  }
  if (j.contains("retry") && j["retry"].is_object()) {
    for (const auto& [k, v] : j["retry"].items()) {
      if (!kRetryKeys.count(k)) throw ConfigError("unknown retry key '" + k + "'");
    }
  }
  try {
    EndpointConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.timeout = Millis{j.value("timeout_ms", c.timeout.count())};
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.initial_backoff = Millis{r.value("initial_backoff_ms", c.retry.initial_backoff.count())};
      c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
      c.retry.max_backoff = Millis{r.value("max_backoff_ms", c.retry.max_backoff.count())};
    }
    c.rate_limit_rpm = j.value("rate_limit_rpm", c.rate_limit_rpm);
    c.max_image_bytes = j.value("max_image_bytes", c.max_image_bytes);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad endpoint config: ") + e.what());
  }
}

}  // namespace tabqa::gateway
