#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "tabqa/util.hpp"

namespace tabqa::gateway {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

struct ImagePayload {
  std::string bytes;
  std::string media_type = "image/png";
};

/// A text or image part of a message.
struct ContentPart {
  enum class Kind { kText, kImage } kind = Kind::kText;
  std::string text;
  ImagePayload image;

  static ContentPart of_text(std::string text) { return {Kind::kText, std::move(text), {}}; }
  static ContentPart of_image(ImagePayload image) { return {Kind::kImage, {}, std::move(image)}; }
};

struct ChatMessage {
  Role role = Role::kUser;
  std::vector<ContentPart> parts;
};

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  int max_output_tokens = 512;
  double temperature = 0.0;

  /// Throws ConfigError: empty conversation, empty message, or more than
  /// one image part.
  void validate() const;
  std::size_t image_count() const;
};

enum class FinishReason { kStop, kLength, kContentFilter, kOther, kDryRun };

std::string_view to_string(FinishReason reason);

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int total_tokens = 0;
};

struct ChatResponse {
  std::string text;
  FinishReason finish_reason = FinishReason::kStop;
  Usage usage;
  std::int64_t latency_ms = 0;
  int attempts = 0;
};

/// Anything that answers chat requests: a remote endpoint or a test double.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Chat-completions wire body: `messages[].content` is an array of typed
/// parts (`text`, `image_url` with a base64 data URL).
json to_wire_json(const ChatRequest& request, const std::string& wire_model);

/// Parses `choices[0].message.content`, `finish_reason` and `usage`.
/// Throws EndpointError on an unexpected shape.
ChatResponse parse_wire_response(std::string_view body);

/// Convenience: the concatenated text parts of every message (used by mocks).
std::string flatten_text(const json& wire_request);

}  // namespace tabqa::gateway
