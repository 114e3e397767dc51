#include "tabqa/runners/record.hpp"

#include <algorithm>

#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::runners {

std::string_view to_string(Method m) { return m == Method::kDirect ? "direct" : "indirect"; }

Method method_from_string(std::string_view s) {
  if (s == "direct") return Method::kDirect;
  if (s == "indirect") return Method::kIndirect;
  throw ConfigError("method must be direct or indirect, got " + std::string(s));
}

std::string_view to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::kOk: return "ok";
    case RecordStatus::kConversionFailed: return "conversion_failed";
    case RecordStatus::kEndpointFailed: return "endpoint_failed";
  }
  return "ok";
}

RecordStatus status_from_string(std::string_view s) {
  if (s == "ok") return RecordStatus::kOk;
  if (s == "conversion_failed") return RecordStatus::kConversionFailed;
  if (s == "endpoint_failed") return RecordStatus::kEndpointFailed;
  throw ConfigError("unknown record status: " + std::string(s));
}

ordered_json to_json(const GenerationRecord& r) {
  ordered_json j = {{"triplet_id", r.triplet_id},
                    {"method", std::string(to_string(r.method))},
                    {"model_id", r.model_id},
                    {"generated_answer", r.generated_answer}};
  if (r.intermediate_latex) j["intermediate_latex"] = *r.intermediate_latex;
  j["status"] = std::string(to_string(r.status));
  j["latency_ms"] = r.latency_ms;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

GenerationRecord record_from_json(const json& j) {
  try {
    GenerationRecord r;
    r.triplet_id = j.at("triplet_id").get<std::string>();
    r.method = method_from_string(j.at("method").get<std::string>());
    r.model_id = j.at("model_id").get<std::string>();
    r.generated_answer = j.value("generated_answer", "");
    if (j.contains("intermediate_latex")) r.intermediate_latex = j["intermediate_latex"].get<std::string>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.latency_ms = j.value("latency_ms", std::int64_t{0});
    r.error = j.value("error", "");
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad generation record: ") + e.what());
  }
}

RecordStore::RecordStore(fs::path run_dir) : dir_(std::move(run_dir)) {
  for (const auto& r : records()) {
    if (!keys_.insert(r.key()).second) {
      throw DuplicateRecord("run store " + dir_.string() + " holds a duplicate record for " +
                            r.triplet_id + "/" + r.model_id);
    }
  }
}

bool RecordStore::contains(const GenerationRecord::Key& key) const {
  std::lock_guard lock(mu_);
  return keys_.count(key) > 0;
}

std::size_t RecordStore::size() const {
  std::lock_guard lock(mu_);
  return keys_.size();
}

void RecordStore::append(const GenerationRecord& record) {
  std::lock_guard lock(mu_);
  if (keys_.count(record.key())) {
    throw DuplicateRecord("record exists: " + record.triplet_id + " " +
                          std::string(to_string(record.method)) + " " + record.model_id);
  }
  fs::create_directories(dir_);
  append_json_line(dir_ / kFileName, json(to_json(record)));
  keys_.insert(record.key());
}

std::vector<GenerationRecord> RecordStore::records() const {
  std::vector<GenerationRecord> out;
  for (const auto& j : read_json_lines(dir_ / kFileName)) out.push_back(record_from_json(j));
  return out;
}

void RecordStore::compact() {
  std::lock_guard lock(mu_);
  std::vector<GenerationRecord> all;
  for (const auto& j : read_json_lines(dir_ / kFileName)) all.push_back(record_from_json(j));
  if (all.empty()) return;
  std::sort(all.begin(), all.end(), [](const GenerationRecord& a, const GenerationRecord& b) {
    return std::tie(a.model_id, a.method, a.triplet_id) < std::tie(b.model_id, b.method, b.triplet_id);
  });
  std::vector<json> rows;
  rows.reserve(all.size());
  for (const auto& r : all) rows.push_back(json(to_json(r)));
  write_json_lines(dir_ / kFileName, rows);
}

}  // namespace tabqa::runners
