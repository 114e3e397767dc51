#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace tabqa::gateway {

using Headers = std::vector<std::pair<std::string, std::string>>;

struct HttpResult {
  int status = 0;               // 0 when no HTTP response arrived
  std::string body;
  std::string transport_error;  // set when status == 0
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResult post_json(const std::string& url, const std::string& body, const Headers& headers,
                               std::chrono::milliseconds timeout) = 0;
};

/// HTTP(S) transport; one connection per request so it is freely shareable.
class HttpTransport final : public Transport {
 public:
  HttpResult post_json(const std::string& url, const std::string& body, const Headers& headers,
                       std::chrono::milliseconds timeout) override;
};

}  // namespace tabqa::gateway
