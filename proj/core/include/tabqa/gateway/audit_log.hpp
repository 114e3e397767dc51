#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "tabqa/util.hpp"

namespace tabqa::gateway {

/// One line per endpoint attempt. Carries the request hash, never the
/// request body or credentials.
struct AuditEntry {
  std::string role;
  std::string model_id;
  std::string endpoint;
  std::string request_hash;
  int attempt = 0;
  std::string outcome;  // ok | retry | exhausted | rejected | dry_run
  int http_status = 0;
  std::string error;
  std::int64_t latency_ms = 0;
  std::int64_t backoff_ms = 0;
  double at_ms = 0;  // clock reading when the attempt was issued
};

json to_json(const AuditEntry& entry);

class AuditLog {
 public:
  virtual ~AuditLog() = default;
  virtual void record(const AuditEntry& entry) = 0;
};

class FileAuditLog final : public AuditLog {
 public:
  explicit FileAuditLog(std::filesystem::path path) : path_(std::move(path)) {}
  void record(const AuditEntry& entry) override;

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

class MemoryAuditLog final : public AuditLog {
 public:
  void record(const AuditEntry& entry) override;
  std::vector<AuditEntry> entries() const;

 private:
  mutable std::mutex mu_;
  std::vector<AuditEntry> entries_;
};

class NullAuditLog final : public AuditLog {
 public:
  void record(const AuditEntry&) override {}
};

}  // namespace tabqa::gateway
