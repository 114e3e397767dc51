#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tabqa/util.hpp"

namespace tabqa::runners {

enum class Method { kDirect, kIndirect };
enum class RecordStatus { kOk, kConversionFailed, kEndpointFailed };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);
std::string_view to_string(RecordStatus s);
RecordStatus status_from_string(std::string_view s);

struct GenerationRecord {
  std::string triplet_id;
  Method method = Method::kDirect;
  std::string model_id;
  std::string generated_answer;
  std::optional<std::string> intermediate_latex;  // raw converter output
  RecordStatus status = RecordStatus::kOk;
  std::int64_t latency_ms = 0;
  std::string error;  // endpoint or conversion diagnostic

  using Key = std::tuple<std::string, Method, std::string>;
  Key key() const { return {triplet_id, method, model_id}; }
};

ordered_json to_json(const GenerationRecord& r);
GenerationRecord record_from_json(const json& j);

/// `records.jsonl` of one run directory. Appends are serialized and a key is
/// accepted once.
class RecordStore {
 public:
  static constexpr const char* kFileName = "records.jsonl";

  explicit RecordStore(std::filesystem::path run_dir);

  const std::filesystem::path& dir() const { return dir_; }
  bool contains(const GenerationRecord::Key& key) const;
  std::size_t size() const;

  /// Throws DuplicateRecord.
  void append(const GenerationRecord& record);
  std::vector<GenerationRecord> records() const;
  /// Rewrites the file ordered by (model_id, method, triplet_id).
  void compact();

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::set<GenerationRecord::Key> keys_;
};

}  // namespace tabqa::runners
