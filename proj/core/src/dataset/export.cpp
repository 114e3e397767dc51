#include "tabqa/dataset/export.hpp"

#include <map>

#include "tabqa/error.hpp"

namespace fs = std::filesystem;

namespace tabqa::dataset {

void export_chat_dataset(const DatasetSplit& split, Subset subset, std::span<const QATriplet> triplets,
                         const ingest::Manifest& manifest, const std::string& system_prompt,
                         const fs::path& out_file) {
  std::map<std::string, const QATriplet*> by_id;
  for (const auto& t : triplets) by_id[t.id] = &t;

  const fs::path out_dir = fs::absolute(out_file).parent_path();
  std::map<std::string, ordered_json> records;  // ordered by id
  for (const auto& id : split.ids(subset)) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ConfigError("split names unknown triplet " + id);
    const QATriplet& t = *it->second;
    if (!manifest.find(t.image_file)) {
      throw MissingImage(t.id + ": " + t.image_file + " is not in the manifest");
    }
    const fs::path image = fs::absolute(manifest.root() / t.image_file);
    if (!fs::exists(image)) throw MissingImage(t.id + ": " + image.string() + " does not exist");

    ordered_json messages = ordered_json::array();
    messages.push_back(
        {{"role", "system"}, {"content", {{{"type", "text"}, {"text", system_prompt}}}}});
    messages.push_back(
        {{"role", "user"},
         {"content",
          {{{"type", "image"}, {"image", image.lexically_relative(out_dir).generic_string()}},
           {{"type", "text"}, {"text", t.question}}}}});
    messages.push_back(
        {{"role", "assistant"}, {"content", {{{"type", "text"}, {"text", t.answer}}}}});
    records[t.id] = {{"id", t.id}, {"image_file", t.image_file}, {"messages", std::move(messages)}};
  }

  ordered_json array = ordered_json::array();
  for (auto& [id, r] : records) array.push_back(std::move(r));
  fs::create_directories(out_dir);
  write_file_atomic(out_file, array.dump(2) + "\n");
}

}  // namespace tabqa::dataset
