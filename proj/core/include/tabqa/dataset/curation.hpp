#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tabqa/dataset/triplet.hpp"
#include "tabqa/gateway/chat.hpp"
#include "tabqa/ingest/ingest.hpp"

namespace tabqa::dataset {

inline constexpr std::size_t kMaxPairsPerImage = 2;

/// Default generator prompt. Contains the JSON-only output contract.
const std::string& default_generation_prompt();

struct GenerationOptions {
  std::string model_id;
  std::string prompt = default_generation_prompt();
  int max_output_tokens = 1024;
  double temperature = 0.0;
};

struct QAPair {
  std::string question;
  std::string answer;
};

/// Extracts up to kMaxPairsPerImage pairs from a model reply: the first
/// balanced JSON objects in the text, each of which must parse and carry
/// non-empty "Question" and "Answer". A list answer is joined with ", ".
/// Throws MalformedGeneration.
std::vector<QAPair> parse_qa_reply(std::string_view reply);

/// One generation call for one page image, retried once on malformed
/// output. Throws MalformedGeneration or EndpointError.
std::vector<QATriplet> generate_qa_pairs(const ingest::PageImage& page,
                                         const std::filesystem::path& manifest_root,
                                         gateway::ChatClient& generator,
                                         const GenerationOptions& options);

struct CurationOptions {
  GenerationOptions generation;
  std::size_t parallelism = 4;
};

struct CurationSummary {
  std::size_t pages_considered = 0;
  std::size_t pages_skipped = 0;  // already curated
  std::size_t triplets_added = 0;
  std::size_t failures = 0;
};

/// Runs generation over every manifest page that has no stored triplet yet.
/// Failures (malformed output, endpoint errors) are appended to
/// `<store>/curation_failures.jsonl` and do not stop the run.
CurationSummary curate(const ingest::Manifest& manifest, TripletStore& store,
                       gateway::ChatClient& generator, const CurationOptions& options);

}  // namespace tabqa::dataset
