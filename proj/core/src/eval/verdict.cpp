#include "tabqa/eval/verdict.hpp"

#include <algorithm>
#include <map>

#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::eval {

std::string_view to_string(Grader g) { return g == Grader::kJudge ? "judge" : "matcher"; }
std::string_view to_string(Label l) { return l == Label::kCorrect ? "correct" : "incorrect"; }

ordered_json to_json(const Verdict& v) {
  ordered_json j = {{"triplet_id", v.triplet_id},
                    {"model_id", v.model_id},
                    {"method", std::string(runners::to_string(v.method))},
                    {"grader", std::string(to_string(v.grader))},
                    {"label", std::string(to_string(v.label))}};
  if (v.judge_raw) j["judge_raw"] = *v.judge_raw;
  return j;
}

Verdict verdict_from_json(const json& j) {
  try {
    Verdict v;
    v.triplet_id = j.at("triplet_id").get<std::string>();
    v.model_id = j.at("model_id").get<std::string>();
    v.method = runners::method_from_string(j.at("method").get<std::string>());
    const auto grader = j.at("grader").get<std::string>();
    if (grader != "judge" && grader != "matcher") throw ConfigError("unknown grader " + grader);
    v.grader = grader == "judge" ? Grader::kJudge : Grader::kMatcher;
    const auto label = j.at("label").get<std::string>();
    if (label != "correct" && label != "incorrect") throw ConfigError("unknown label " + label);
    v.label = label == "correct" ? Label::kCorrect : Label::kIncorrect;
    if (j.contains("judge_raw")) v.judge_raw = j["judge_raw"].get<std::string>();
    if (v.judge_raw.has_value() != (v.grader == Grader::kJudge)) {
      throw ConfigError("judge_raw must be present exactly for judge verdicts");
    }
    return v;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad verdict record: ") + e.what());
  }
}

VerdictStore::VerdictStore(fs::path run_dir) : path_(std::move(run_dir) / kFileName) {}

std::vector<Verdict> VerdictStore::verdicts() const {
  std::lock_guard lock(mu_);
  std::vector<Verdict> out;
  for (const auto& j : read_json_lines(path_)) out.push_back(verdict_from_json(j));
  return out;
}

void VerdictStore::upsert(std::span<const Verdict> verdicts) {
  std::lock_guard lock(mu_);
  std::map<Verdict::Key, Verdict> merged;
  for (const auto& j : read_json_lines(path_)) {
    auto v = verdict_from_json(j);
    merged.insert_or_assign(v.key(), std::move(v));
  }
  for (const auto& v : verdicts) merged.insert_or_assign(v.key(), v);
  std::vector<json> rows;
  rows.reserve(merged.size());
  for (const auto& [key, v] : merged) rows.push_back(json(to_json(v)));
  fs::create_directories(path_.parent_path());
  write_json_lines(path_, rows);
}

}  // namespace tabqa::eval
