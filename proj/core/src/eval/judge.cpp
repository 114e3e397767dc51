#include "tabqa/eval/judge.hpp"

#include <map>
#include <mutex>
#include <set>

#include "tabqa/error.hpp"
#include "tabqa/eval/matcher.hpp"

namespace fs = std::filesystem;

namespace tabqa::eval {

std::string judge_prompt(std::string_view question, std::string_view ground_truth,
                         std::string_view generated) {
  std::string p;
  p += "Decide whether a generated answer to a question about a table matches the ground truth. "
       "Ignore differences in wording, formatting and an omitted unit when the value is the same. "
       "Any different value is wrong.\n\n";
  p += "Question: ";
  p += question;
  p += "\nGround truth: ";
  p += ground_truth;
  p += "\nGenerated answer: ";
  p += generated;
  p += "\n\nReply with exactly one word: CORRECT or INCORRECT.";
  return p;
}

std::optional<Label> parse_judge_reply(std::string_view reply) {
  std::string s = normalize_answer(reply);
  while (!s.empty() && std::string_view(".!\"'").find(s.back()) != std::string_view::npos) s.pop_back();
  while (!s.empty() && std::string_view("\"'").find(s.front()) != std::string_view::npos) s.erase(0, 1);
  if (s == "correct") return Label::kCorrect;
  if (s == "incorrect") return Label::kIncorrect;
  return std::nullopt;
}

Grade grade_with_judge(std::string_view question, std::string_view ground_truth,
                       std::string_view generated, gateway::ChatClient* judge,
                       const JudgeOptions& options, const std::string* image_png) {
  Grade fallback{Grader::kMatcher, grade_with_matcher(generated, ground_truth), std::nullopt};
  if (!judge || normalize_whitespace(generated).empty()) return fallback;

  gateway::ChatRequest req;
  req.model_id = options.model_id;
  req.max_output_tokens = options.max_output_tokens;
  req.temperature = options.temperature;
  gateway::ChatMessage user{gateway::Role::kUser, {}};
  if (options.include_image && image_png) {
    user.parts.push_back(gateway::ContentPart::of_image({*image_png, "image/png"}));
  }
  user.parts.push_back(gateway::ContentPart::of_text(judge_prompt(question, ground_truth, generated)));
  req.messages.push_back(std::move(user));

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string raw;
    try {
      raw = judge->complete(req).text;
    } catch (const EndpointError&) {
      return fallback;
    }
    if (auto label = parse_judge_reply(raw)) return {Grader::kJudge, *label, raw};
  }
  return fallback;
}

JudgeRunSummary judge_run(const fs::path& run_dir, std::span<const dataset::QATriplet> triplets,
                          const ingest::Manifest& images, gateway::ChatClient* judge,
                          const JudgeOptions& options, std::size_t parallelism) {
  if (!fs::exists(run_dir / runners::RecordStore::kFileName)) {
    throw ConfigError("no records in run directory " + run_dir.string());
  }
  runners::RecordStore records(run_dir);
  VerdictStore store(run_dir);

  std::map<std::string, const dataset::QATriplet*> by_id;
  for (const auto& t : triplets) by_id[t.id] = &t;
  std::set<Verdict::Key> done;
  for (const auto& v : store.verdicts()) done.insert(v.key());

  std::vector<runners::GenerationRecord> pending;
  JudgeRunSummary summary;
  for (auto& r : records.records()) {
    ++summary.records;
    if (!by_id.count(r.triplet_id)) throw ConfigError("record names unknown triplet " + r.triplet_id);
    if (!done.count({r.model_id, r.triplet_id, r.method})) pending.push_back(std::move(r));
  }

  std::vector<Verdict> verdicts(pending.size());
  std::mutex mu;
  parallel_for(pending.size(), parallelism, [&](std::size_t i) {
    const auto& r = pending[i];
    const auto& t = *by_id.at(r.triplet_id);
    std::string image;
    if (options.include_image && images.find(t.image_file)) image = read_file(images.root() / t.image_file);
    Grade g = grade_with_judge(t.question, t.answer, r.generated_answer, judge, options,
                               image.empty() ? nullptr : &image);
    verdicts[i] = Verdict{r.triplet_id, r.model_id, r.method, g.grader, g.label, g.judge_raw};
    if (judge && g.grader == Grader::kMatcher) {
      std::lock_guard lock(mu);
      ++summary.fallbacks;
    }
  });
  if (!verdicts.empty()) store.upsert(verdicts);
  summary.graded = verdicts.size();
  return summary;
}

}  // namespace tabqa::eval
