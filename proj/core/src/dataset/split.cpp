#include "tabqa/dataset/split.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "tabqa/error.hpp"

namespace tabqa::dataset {

std::string_view to_string(Subset s) { return s == Subset::kTrain ? "train" : "test"; }

Subset subset_from_string(std::string_view s) {
  if (s == "train") return Subset::kTrain;
  if (s == "test") return Subset::kTest;
  throw ConfigError("subset must be train or test, got " + std::string(s));
}

ordered_json to_json(const DatasetSplit& s) {
  return {{"seed", s.seed}, {"train", s.train}, {"test", s.test}};
}

DatasetSplit split_from_json(const json& j) {
  try {
    DatasetSplit s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.train = j.at("train").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad split file: ") + e.what());
  }
}

namespace {

// Unbiased draw in [0, bound) by rejection; std::uniform_int_distribution is
// implementation-defined and would make splits differ across toolchains.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

DatasetSplit split_dataset(std::span<const QATriplet> triplets, std::size_t train_size,
                           std::uint64_t seed) {
  if (train_size > triplets.size()) {
    throw InsufficientData("train_size " + std::to_string(train_size) + " exceeds " +
                           std::to_string(triplets.size()) + " triplets");
  }
  std::map<std::string, std::vector<std::string>> by_image;
  for (const auto& t : triplets) by_image[t.image_file].push_back(t.id);
  std::vector<std::vector<std::string>> groups;
  groups.reserve(by_image.size());
  for (auto& [image, ids] : by_image) groups.push_back(std::move(ids));

  std::mt19937_64 rng(seed);
  for (std::size_t i = groups.size(); i > 1; --i) {
    std::swap(groups[i - 1], groups[bounded(rng, i)]);
  }

  // reach[g][s]: groups g.. can contribute exactly s triplets.
  const std::size_t n = groups.size();
  std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(train_size + 1, false));
  reach[n][0] = true;
  for (std::size_t g = n; g-- > 0;) {
    const std::size_t size = groups[g].size();
    for (std::size_t s = 0; s <= train_size; ++s) {
      reach[g][s] = reach[g + 1][s] || (s >= size && reach[g + 1][s - size]);
    }
  }
  if (!reach[0][train_size]) {
    throw InsufficientData("no page-level grouping yields exactly " + std::to_string(train_size) +
                           " training triplets");
  }

  DatasetSplit split;
  split.seed = seed;
  std::size_t need = train_size;
  for (std::size_t g = 0; g < n; ++g) {
    const std::size_t size = groups[g].size();
    const bool take = size <= need && reach[g + 1][need - size];
    auto& side = take ? split.train : split.test;
    side.insert(side.end(), groups[g].begin(), groups[g].end());
    if (take) need -= size;
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace tabqa::dataset
