#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabqa/ingest/ingest.hpp"
#include "tabqa/util.hpp"

namespace tabqa::dataset {

enum class Provenance { kGenerated, kManuallyValidated };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct QATriplet {
  std::string id;
  std::string question;
  std::string answer;
  std::string image_file;  // manifest image_path
  Provenance provenance = Provenance::kGenerated;

  friend bool operator==(const QATriplet&, const QATriplet&) = default;
};

/// First 16 hex digits of sha256(image_hash + "\n" + question).
std::string triplet_id(std::string_view image_hash, std::string_view question);

/// Store layout: `Question`, `Answer`, `image_file`, `id`, `provenance`.
ordered_json to_json(const QATriplet& t);
QATriplet triplet_from_json(const json& j);

/// A manual-validation step. Updates keep the triplet id so that joins
/// against earlier runs stay valid.
struct TripletEdit {
  enum class Op { kUpdate, kAdd, kRemove } op = Op::kUpdate;
  std::string id;          // update/remove
  std::string image_file;  // add
  std::optional<std::string> question;
  std::optional<std::string> answer;
  std::string note;
};

ordered_json to_json(const TripletEdit& e);
/// Throws ConfigError on an unknown op or missing fields.
TripletEdit edit_from_json(const json& j);

/// Generated triplets (`triplets.jsonl`) plus an append-only manual edit log
/// (`edits.jsonl`) in one directory. The generated file is never rewritten
/// by edits; the effective dataset replays the log over it.
class TripletStore {
 public:
  static constexpr const char* kTripletsFile = "triplets.jsonl";
  static constexpr const char* kEditsFile = "edits.jsonl";

  explicit TripletStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::vector<QATriplet> generated() const;
  std::vector<TripletEdit> edits() const;
  /// Edits applied, sorted by id.
  std::vector<QATriplet> triplets() const;

  /// Appends a generated triplet. Returns false if the id is already stored.
  bool append(const QATriplet& t);
  /// Rewrites the generated file sorted by (image_file, id).
  void compact();

  /// Validates `edits` against the current dataset and the manifest, then
  /// appends them to the edit log. All-or-nothing.
  void apply_edits(std::span<const TripletEdit> edits, const ingest::Manifest& manifest);

 private:
  std::filesystem::path dir_;
};

/// Replays `edits` over `base`. Throws ConfigError for edits naming unknown
/// ids, duplicate adds, empty fields, or images absent from `manifest`.
std::vector<QATriplet> replay_edits(std::vector<QATriplet> base, std::span<const TripletEdit> edits,
                                    const ingest::Manifest& manifest);

/// Referential-integrity and cap problems; empty when the dataset is sound.
std::vector<std::string> verify_triplets(std::span<const QATriplet> triplets,
                                         const ingest::Manifest& manifest);

}  // namespace tabqa::dataset
