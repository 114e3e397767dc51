#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "tabqa/dataset/split.hpp"
#include "tabqa/dataset/triplet.hpp"
#include "tabqa/ingest/ingest.hpp"

namespace tabqa::dataset {

/// Placeholder system prompt for fine-tuning export; configurable.
inline constexpr const char* kDefaultExportSystemPrompt =
    "You answer questions about tables in building code documents. "
    "Reply with the exact value from the table.";

/// Writes a JSON array with one record per triplet of `subset`, ordered by
/// id: `{"id", "image_file", "messages": [system, user, assistant]}`. The
/// user message holds an image part (path relative to the output file's
/// directory) followed by the question. Throws MissingImage, or
/// ConfigError if the split names an unknown triplet.
void export_chat_dataset(const DatasetSplit& split, Subset subset,
                         std::span<const QATriplet> triplets, const ingest::Manifest& manifest,
                         const std::string& system_prompt, const std::filesystem::path& out_file);

}  // namespace tabqa::dataset
