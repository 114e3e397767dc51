#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>

#include "tabqa/dataset/split.hpp"
#include "tabqa/dataset/triplet.hpp"
#include "tabqa/gateway/chat.hpp"
#include "tabqa/ingest/ingest.hpp"
#include "tabqa/runners/record.hpp"

namespace tabqa::runners {

const std::string& default_answer_system_prompt();
const std::string& default_conversion_prompt();

struct AnswerOptions {
  std::string system_prompt = default_answer_system_prompt();  // empty: no system message
  std::string conversion_prompt = default_conversion_prompt();
  std::string converter_model_id;
  int max_output_tokens = 512;
  int conversion_max_output_tokens = 4096;
  double temperature = 0.0;
  bool indirect_include_image = false;
};

/// One answerer call with the page image and the question. Gateway errors
/// become status endpoint_failed.
GenerationRecord run_direct(const dataset::QATriplet& triplet, const std::string& image_png,
                            gateway::ChatClient& answerer, const std::string& model_id,
                            const AnswerOptions& options);

/// Converter call (image to LaTeX), validation with the table parser, then
/// an answerer call on the LaTeX text. An unparseable conversion is flagged
/// conversion_failed and still answered; a converter endpoint failure stops
/// before answering.
GenerationRecord run_indirect(const dataset::QATriplet& triplet, const std::string& image_png,
                              gateway::ChatClient& converter, gateway::ChatClient& answerer,
                              const std::string& model_id, const AnswerOptions& options);

struct RunManifest {
  std::string run_id;
  Method method = Method::kDirect;
  dataset::Subset subset = dataset::Subset::kTest;
  std::vector<std::string> models;
  std::string config_hash;
  std::uint64_t split_seed = 0;
  std::size_t triplet_count = 0;
  std::size_t record_count = 0;
  std::size_t executed = 0;  // records produced by this invocation (not persisted)
};

ordered_json to_json(const RunManifest& m);
RunManifest run_manifest_from_json(const json& j);

struct RunRequest {
  std::string run_id;
  Method method = Method::kDirect;
  dataset::Subset subset = dataset::Subset::kTest;
  std::vector<std::string> models;
  std::string config_hash;
  std::size_t parallelism = 4;
  bool dry_run = false;  // send through the gateway but persist nothing
  AnswerOptions answer;
};

/// Looks up the chat client serving a model id (answerer) or the converter
/// (empty id). Throws ConfigError for unknown ids.
using ClientResolver = std::function<gateway::ChatClient&(const std::string& model_id)>;

/// Executes `request.method` for every (triplet in subset, model) into
/// `<runs_root>/<run_id>/`. Existing records are skipped, so an interrupted
/// run resumes. A run id reused with a different config hash, method or
/// subset is a ConfigError.
RunManifest run_split(const dataset::DatasetSplit& split, std::span<const dataset::QATriplet> triplets,
                      const ingest::Manifest& images, const ClientResolver& clients,
                      const std::filesystem::path& runs_root, const RunRequest& request);

}  // namespace tabqa::runners
