#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tabqa/runners/record.hpp"
#include "tabqa/util.hpp"

namespace tabqa::eval {

enum class Grader { kJudge, kMatcher };
enum class Label { kCorrect, kIncorrect };

std::string_view to_string(Grader g);
std::string_view to_string(Label l);

struct Verdict {
  std::string triplet_id;
  std::string model_id;
  runners::Method method = runners::Method::kDirect;
  Grader grader = Grader::kMatcher;
  Label label = Label::kIncorrect;
  std::optional<std::string> judge_raw;  // set iff grader == kJudge

  bool correct() const { return label == Label::kCorrect; }
  using Key = std::tuple<std::string, std::string, runners::Method>;
  Key key() const { return {model_id, triplet_id, method}; }
};

ordered_json to_json(const Verdict& v);
Verdict verdict_from_json(const json& j);

/// `verdicts.jsonl` beside a run's records; one verdict per record key,
/// kept sorted by (model_id, triplet_id, method).
class VerdictStore {
 public:
  static constexpr const char* kFileName = "verdicts.jsonl";

  explicit VerdictStore(std::filesystem::path run_dir);

  std::vector<Verdict> verdicts() const;
  /// Replaces verdicts with the same key, then rewrites the file.
  void upsert(std::span<const Verdict> verdicts);

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
};

}  // namespace tabqa::eval
