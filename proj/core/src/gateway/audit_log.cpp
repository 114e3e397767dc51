#include "tabqa/gateway/audit_log.hpp"

namespace tabqa::gateway {

json to_json(const AuditEntry& e) {
  ordered_json j = {{"role", e.role},
                    {"model_id", e.model_id},
                    {"endpoint", e.endpoint},
                    {"request_hash", e.request_hash},
                    {"attempt", e.attempt},
                    {"outcome", e.outcome},
                    {"http_status", e.http_status},
                    {"latency_ms", e.latency_ms},
                    {"backoff_ms", e.backoff_ms},
                    {"at_ms", e.at_ms}};
  if (!e.error.empty()) j["error"] = e.error;
  return json::parse(j.dump());
}

void FileAuditLog::record(const AuditEntry& entry) {
  std::lock_guard lock(mu_);
  append_json_line(path_, to_json(entry));
}

void MemoryAuditLog::record(const AuditEntry& entry) {
  std::lock_guard lock(mu_);
  entries_.push_back(entry);
}

std::vector<AuditEntry> MemoryAuditLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

}  // namespace tabqa::gateway
