#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "tabqa/dataset/triplet.hpp"
#include "tabqa/eval/verdict.hpp"
#include "tabqa/gateway/chat.hpp"
#include "tabqa/ingest/ingest.hpp"

namespace tabqa::eval {

/// Prompt presenting question, ground truth and generation, asking for a
/// single CORRECT or INCORRECT token.
std::string judge_prompt(std::string_view question, std::string_view ground_truth,
                         std::string_view generated);

/// CORRECT / INCORRECT, alone on the reply modulo case, whitespace,
/// trailing punctuation and markdown emphasis; nullopt otherwise.
std::optional<Label> parse_judge_reply(std::string_view reply);

struct JudgeOptions {
  std::string model_id = "judge";
  int max_output_tokens = 8;
  double temperature = 0.0;
  bool include_image = false;
};

struct Grade {
  Grader grader = Grader::kMatcher;
  Label label = Label::kIncorrect;
  std::optional<std::string> judge_raw;
};

/// Asks the judge; an unparseable reply is retried once. A second bad reply
/// or an endpoint failure falls back to the matcher. An empty generation is
/// graded incorrect by the matcher without a judge call. `image_png` is sent
/// only when options.include_image is set.
Grade grade_with_judge(std::string_view question, std::string_view ground_truth,
                       std::string_view generated, gateway::ChatClient* judge,
                       const JudgeOptions& options, const std::string* image_png = nullptr);

struct JudgeRunSummary {
  std::size_t records = 0;
  std::size_t graded = 0;   // new verdicts this invocation
  std::size_t fallbacks = 0;
};

/// Grades every record of `run_dir` lacking a verdict. `judge` may be null
/// (matcher only).
JudgeRunSummary judge_run(const std::filesystem::path& run_dir,
                          std::span<const dataset::QATriplet> triplets,
                          const ingest::Manifest& images, gateway::ChatClient* judge,
                          const JudgeOptions& options, std::size_t parallelism = 4);

}  // namespace tabqa::eval
