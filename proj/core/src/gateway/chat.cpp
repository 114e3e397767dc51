#include "tabqa/gateway/chat.hpp"

#include "tabqa/error.hpp"

namespace tabqa::gateway {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::kStop: return "stop";
    case FinishReason::kLength: return "length";
    case FinishReason::kContentFilter: return "content_filter";
    case FinishReason::kDryRun: return "dry_run";
    case FinishReason::kOther: break;
  }
  return "other";
}

std::size_t ChatRequest::image_count() const {
  std::size_t n = 0;
  for (const auto& m : messages) {
    for (const auto& p : m.parts) n += p.kind == ContentPart::Kind::kImage ? 1 : 0;
  }
  return n;
}

void ChatRequest::validate() const {
  if (model_id.empty()) throw ConfigError("chat request without model_id");
  if (messages.empty()) throw ConfigError("chat request without messages");
  for (const auto& m : messages) {
    if (m.parts.empty()) throw ConfigError("chat message without content");
  }
  if (image_count() > 1) throw ConfigError("at most one image per request is supported");
  if (max_output_tokens <= 0) throw ConfigError("max_output_tokens must be positive");
}

json to_wire_json(const ChatRequest& request, const std::string& wire_model) {
  ordered_json messages = ordered_json::array();
  for (const auto& m : request.messages) {
    ordered_json content = ordered_json::array();
    for (const auto& p : m.parts) {
      if (p.kind == ContentPart::Kind::kText) {
        content.push_back({{"type", "text"}, {"text", p.text}});
      } else {
        content.push_back(
            {{"type", "image_url"},
             {"image_url",
              {{"url", "data:" + p.image.media_type + ";base64," + base64_encode(p.image.bytes)}}}});
      }
    }
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", std::move(content)}});
  }
  ordered_json body = {{"model", wire_model},
                       {"messages", std::move(messages)},
                       {"max_tokens", request.max_output_tokens},
                       {"temperature", request.temperature}};
  return json::parse(body.dump());
}

ChatResponse parse_wire_response(std::string_view body) {
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw EndpointError("response is not a JSON object");
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    throw EndpointError("response has no choices");
  }
  const json& choice = (*choices)[0];
  ChatResponse r;
  const json* content = nullptr;
  if (choice.contains("message") && choice["message"].contains("content")) {
    content = &choice["message"]["content"];
  }
  if (content && content->is_string()) {
    r.text = content->get<std::string>();
  } else if (content && content->is_array()) {
    for (const auto& part : *content) {
      if (part.is_object() && part.value("type", "") == "text") r.text += part.value("text", "");
    }
  } else if (!content || !content->is_null()) {
    throw EndpointError("response choice has no message content");
  }
  std::string finish = choice.value("finish_reason", "stop");
  if (choice.contains("finish_reason") && choice["finish_reason"].is_null()) finish = "stop";
  r.finish_reason = finish == "stop"             ? FinishReason::kStop
                    : finish == "length"         ? FinishReason::kLength
                    : finish == "content_filter" ? FinishReason::kContentFilter
                                                 : FinishReason::kOther;
  if (r.finish_reason == FinishReason::kStop && (!content || content->is_null())) {
    throw EndpointError("normal completion without text");
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    const auto& u = j["usage"];
    r.usage.prompt_tokens = u.value("prompt_tokens", 0);
    r.usage.completion_tokens = u.value("completion_tokens", 0);
    r.usage.total_tokens = u.value("total_tokens", r.usage.prompt_tokens + r.usage.completion_tokens);
  }
  return r;
}

std::string flatten_text(const json& wire_request) {
  std::string out;
  if (!wire_request.contains("messages")) return out;
  for (const auto& m : wire_request["messages"]) {
    const auto& content = m.value("content", json());
    if (content.is_string()) {
      out += content.get<std::string>();
      out += '\n';
      continue;
    }
    if (!content.is_array()) continue;
    for (const auto& part : content) {
      if (part.value("type", "") == "text") {
        out += part.value("text", "");
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace tabqa::gateway
